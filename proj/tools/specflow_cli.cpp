#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iostream>

#include "specflow/circular_jacobi.hpp"
#include "specflow/errors.hpp"
#include "specflow/scenario.hpp"

namespace sf = specflow;
using sf::Json;

namespace {

struct GridArg {
    double min = -2.0;
    double max = 2.0;
    std::size_t n = 1001;
};

GridArg parse_grid(const std::string& s) {
    GridArg g;
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    sf::require(c1 != std::string::npos && c2 != std::string::npos, sf::ErrorCode::InvalidArgument,
                "grid must be min:max:n");
    try {
        g.min = std::stod(s.substr(0, c1));
        g.max = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        g.n = std::stoul(s.substr(c2 + 1));
    } catch (const std::exception&) {
        sf::raise(sf::ErrorCode::InvalidArgument, "grid must be min:max:n with numeric fields");
    }
    return g;
}

std::pair<int, int> parse_krange(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int k = std::stoi(s);
        return {k, k};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

sf::Scenario scenario_from_flags(const std::string& ensemble, const std::string& init, double tau,
                                 double a_hat, bool has_a_hat, const std::string& grid) {
    sf::Scenario sc;
    sc.ensemble = ensemble;
    sc.tau_hat = tau;
    sc.a_hat = a_hat;
    sc.has_a_hat = has_a_hat;
    sc.initial = sf::parse_init(init, ensemble);
    if (!grid.empty()) {
        GridArg g = parse_grid(grid);
        sc.grid = {g.min, g.max, g.n};
    } else {
        // default grids per ensemble
        if (ensemble == "circular")
            sc.grid = {-sf::kPi, sf::kPi, 1001};
        else if (ensemble == "jacobi")
            sc.grid = {1e-3, sf::kPi - 1e-3, 801};
        else if (ensemble == "wishart")
            sc.grid = {1e-4, 8.0 * std::max(tau, 0.25) + 4.0, 1201};
        else {
            const double span = 2.0 * std::sqrt(std::max(tau, 0.25)) +
                                std::max(std::abs(sc.initial.support_min()),
                                         std::abs(sc.initial.support_max()));
            sc.grid = {-span, span, 1201};
        }
    }
    return sc;
}

int run_and_report(const sf::Scenario& sc, const std::string& out_dir) {
    Json report = sf::run_scenario(sc, out_dir);
    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hydrodynamic spectral-flow solver for additively perturbed random matrices"};
    app.require_subcommand(1);

    // run
    auto* cmd_run = app.add_subcommand("run", "run a scenario file and write artifacts");
    std::string scenario_path, out_dir = "out";
    double tau_override = -1, a_hat_override = -1;
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    std::string grid_override;
    cmd_run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd_run->add_option("--out", out_dir, "output directory");
    cmd_run->add_option("--tau", tau_override, "override tau_hat");
    cmd_run->add_option("--a-hat", a_hat_override, "override a_hat");
    cmd_run->add_option("--grid", grid_override, "override grid min:max:n");
    cmd_run->add_option("--seed", seed_override, "override MC seed")
        ->each([&](const std::string&) { has_seed_override = true; });

    // density
    auto* cmd_density = app.add_subcommand("density", "solve the flow and write a density CSV");
    std::string ensemble = "gaussian", init = "delta:0", grid_arg, out_file = "density.csv";
    double tau = 0.25, a_hat = 0;
    bool a_hat_given = false;
    cmd_density->add_option("--ensemble", ensemble, "gaussian|chiral|wishart|circular|jacobi");
    cmd_density->add_option("--init", init, "delta:x | pair:a | uniform:a:b | file:path");
    cmd_density->add_option("--tau", tau, "scaled time");
    cmd_density->add_option("--a-hat", a_hat, "rectangular asymmetry")
        ->each([&](const std::string&) { a_hat_given = true; });
    cmd_density->add_option("--grid", grid_arg, "min:max:n");
    cmd_density->add_option("--out", out_file, "output CSV path");

    // green
    auto* cmd_green = app.add_subcommand("green", "evaluate the Green's function on a grid");
    std::string g_ensemble = "gaussian", g_init = "delta:0", g_grid, g_out = "green.csv";
    double g_tau = 0.25, g_a = 0, g_eps = 1e-6;
    bool g_a_given = false;
    cmd_green->add_option("--ensemble", g_ensemble, "ensemble");
    cmd_green->add_option("--init", g_init, "initial measure");
    cmd_green->add_option("--tau", g_tau, "scaled time");
    cmd_green->add_option("--a-hat", g_a, "asymmetry")
        ->each([&](const std::string&) { g_a_given = true; });
    cmd_green->add_option("--grid", g_grid, "min:max:n");
    cmd_green->add_option("--eps", g_eps, "imaginary offset");
    cmd_green->add_option("--out", g_out, "output CSV path");

    // mc
    auto* cmd_mc = app.add_subcommand("mc", "sample the matrix model and write spectra");
    std::string m_ensemble = "gaussian", m_init = "delta:0", m_out = "spectrum.jsonl",
                m_hist = "histogram.csv";
    double m_tau = 0.25, m_a = 0;
    bool m_a_given = false;
    int m_N = 256, m_m = 256, m_n = 256, m_beta = 2, m_trials = 16, m_steps = 0, m_bins = 100;
    std::uint64_t m_seed = 1;
    cmd_mc->add_option("--ensemble", m_ensemble, "gaussian|chiral|wishart|circular");
    cmd_mc->add_option("--init", m_init, "initial measure");
    cmd_mc->add_option("--tau", m_tau, "scaled time");
    cmd_mc->add_option("--a-hat", m_a, "asymmetry")
        ->each([&](const std::string&) { m_a_given = true; });
    cmd_mc->add_option("--N", m_N, "matrix size (gaussian/circular)");
    cmd_mc->add_option("--m", m_m, "chiral rows");
    cmd_mc->add_option("--n", m_n, "chiral cols");
    cmd_mc->add_option("--beta", m_beta, "Dyson index 1|2");
    cmd_mc->add_option("--trials", m_trials, "number of trials");
    cmd_mc->add_option("--steps", m_steps, "circular increments");
    cmd_mc->add_option("--bins", m_bins, "histogram bins");
    cmd_mc->add_option("--seed", m_seed, "RNG seed");
    cmd_mc->add_option("--out", m_out, "spectrum JSONL path");
    cmd_mc->add_option("--hist-out", m_hist, "histogram CSV path");

    // moments
    auto* cmd_moments = app.add_subcommand("moments", "moments of a density CSV");
    std::string mo_input, mo_k = "0..4";
    cmd_moments->add_option("--input", mo_input, "density CSV")->required();
    cmd_moments->add_option("--k", mo_k, "moment order or range k0..k1");

    // action
    auto* cmd_action = app.add_subcommand("action", "hydrodynamic action of a trajectory");
    std::string ac_traj;
    double ac_a = 0;
    bool ac_a_given = false;
    cmd_action->add_option("--trajectory", ac_traj, "trajectory JSON")->required();
    cmd_action->add_option("--a-hat", ac_a, "asymmetry (chiral action)")
        ->each([&](const std::string&) { ac_a_given = true; });

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "distances between two density CSVs");
    std::string cp_a, cp_b;
    cmd_compare->add_option("a", cp_a, "first CSV")->required();
    cmd_compare->add_option("b", cp_b, "second CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            std::ifstream is(scenario_path);
            sf::require(is.good(), sf::ErrorCode::IoFailure, "cannot open " + scenario_path);
            Json j;
            try {
                j = Json::parse(is);
            } catch (const Json::exception& e) {
                sf::raise(sf::ErrorCode::InvalidArgument,
                          std::string("scenario JSON parse: ") + e.what());
            }
            sf::Scenario sc = sf::Scenario::from_json(j);
            if (tau_override >= 0) sc.tau_hat = tau_override;
            if (a_hat_override >= 0) {
                sc.a_hat = a_hat_override;
                sc.has_a_hat = true;
            }
            if (!grid_override.empty()) {
                GridArg g = parse_grid(grid_override);
                sc.grid = {g.min, g.max, g.n};
            }
            if (has_seed_override) sc.mc.seed = seed_override;
            return run_and_report(sc, out_dir);
        }
        if (*cmd_density) {
            sf::Scenario sc = scenario_from_flags(ensemble, init, tau, a_hat, a_hat_given, grid_arg);
            sc.validate();
            auto grid = specflow::linspace(sc.grid.min, sc.grid.max, sc.grid.n);
            sf::DensityCurve c;
            if (ensemble == "gaussian")
                c = sf::evolve_density({sc.initial, sc.tau_hat}, grid);
            else if (ensemble == "chiral")
                c = sf::chiral_density({sc.initial, sc.tau_hat, sc.a_hat}, grid);
            else if (ensemble == "wishart")
                c = sf::wishart_density({sc.initial, sc.tau_hat, sc.a_hat}, grid);
            else if (ensemble == "circular")
                c = sf::circular_density({sc.initial, sc.tau_hat}, grid);
            else
                c = sf::jacobi_density({sc.initial, sc.tau_hat, sc.a_hat}, grid);
            sf::write_density_csv(out_file, c);
            std::cout << "{\"artifact\":\"" << out_file << "\",\"mass\":" << sf::format17(c.mass())
                      << "}\n";
            return 0;
        }
        if (*cmd_green) {
            sf::Scenario sc =
                scenario_from_flags(g_ensemble, g_init, g_tau, g_a, g_a_given, g_grid);
            sc.validate();
            auto grid = specflow::linspace(sc.grid.min, sc.grid.max, sc.grid.n);
            std::ostringstream os;
            os << "x,g_re,g_im\n";
            for (double x : grid) {
                std::complex<double> z(x, g_eps), g;
                if (g_ensemble == "gaussian")
                    g = sf::evolve_green({sc.initial, sc.tau_hat}, z).g;
                else if (g_ensemble == "chiral")
                    g = sf::evolve_green_chiral({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
                else if (g_ensemble == "wishart")
                    g = sf::wishart_green({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
                else if (g_ensemble == "circular")
                    g = sf::circular_green({sc.initial, sc.tau_hat}, z).g;
                else
                    g = sf::jacobi_green({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
                os << sf::format17(x) << "," << sf::format17(g.real()) << ","
                   << sf::format17(g.imag()) << "\n";
            }
            sf::atomic_write(g_out, os.str());
            std::cout << "{\"artifact\":\"" << g_out << "\"}\n";
            return 0;
        }
        if (*cmd_mc) {
            sf::EmpiricalSpectrum s;
            if (m_ensemble == "gaussian") {
                s = sf::sample_gaussian_flow(m_N, {sf::parse_init(m_init, m_ensemble), m_tau},
                                             m_beta, m_trials, m_seed);
            } else if (m_ensemble == "chiral" || m_ensemble == "wishart") {
                s = sf::sample_chiral_flow(m_m, m_n,
                                           {sf::parse_init(m_init, m_ensemble), m_tau, m_a},
                                           m_beta, m_trials, m_seed);
                if (m_ensemble == "wishart") {
                    for (auto& v : s.values) v *= v;
                    for (auto& t : s.by_trial)
                        for (auto& v : t) v *= v;
                }
            } else if (m_ensemble == "circular") {
                const int min_steps = std::max(1, int(std::ceil(50.0 * m_tau)));
                s = sf::sample_circular_flow(m_N, std::max(m_steps, min_steps), m_tau, m_trials,
                                             m_seed);
            } else {
                sf::raise(sf::ErrorCode::InvalidArgument,
                          "mc supports gaussian|chiral|wishart|circular");
            }
            sf::write_spectrum_jsonl(m_out, s);
            sf::write_histogram_csv(m_hist, sf::empirical_histogram(s, m_bins));
            std::cout << "{\"spectrum\":\"" << m_out << "\",\"histogram\":\"" << m_hist
                      << "\",\"count\":" << s.values.size() << "}\n";
            return 0;
        }
        if (*cmd_moments) {
            sf::DensityCurve c = sf::read_density_csv(mo_input);
            auto [k0, k1] = parse_krange(mo_k);
            sf::require(k0 >= 0 && k1 >= k0, sf::ErrorCode::InvalidArgument,
                        "--k must be k or k0..k1");
            Json out = Json::array();
            for (int k = k0; k <= k1; ++k) out.push_back(sf::moments(c, k));
            std::cout << out.dump() << "\n";
            return 0;
        }
        if (*cmd_action) {
            std::ifstream is(ac_traj);
            sf::require(is.good(), sf::ErrorCode::IoFailure, "cannot open " + ac_traj);
            sf::Trajectory t = sf::trajectory_from_json(Json::parse(is));
            const double s = ac_a_given ? sf::chiral_action(t, ac_a) : sf::gaussian_action(t);
            std::cout << "{\"action\":" << sf::format17(s) << "}\n";
            return 0;
        }
        if (*cmd_compare) {
            sf::DensityCurve a = sf::read_density_csv(cp_a);
            sf::DensityCurve b = sf::read_density_csv(cp_b);
            std::vector<double> xs = a.grid;
            xs.insert(xs.end(), b.grid.begin(), b.grid.end());
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            double sup = 0;
            std::vector<double> diff(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                diff[i] = std::abs(a.value_at(xs[i]) - b.value_at(xs[i]));
                sup = std::max(sup, diff[i]);
            }
            const double l1 = sf::trapezoid(xs, diff);
            sf::Histogram unused;  // W1 via normalized CDFs of the two curves
            double w1 = 0;
            {
                auto cdf = [](const sf::DensityCurve& c) {
                    std::vector<double> F(c.grid.size(), 0.0);
                    for (std::size_t i = 0; i + 1 < c.grid.size(); ++i)
                        F[i + 1] = F[i] + 0.5 * (c.values[i] + c.values[i + 1]) *
                                              (c.grid[i + 1] - c.grid[i]);
                    const double m = F.back() > 0 ? F.back() : 1.0;
                    for (auto& f : F) f /= m;
                    return F;
                };
                auto Fa = cdf(a), Fb = cdf(b);
                auto eval = [](const std::vector<double>& g, const std::vector<double>& F,
                               double x) {
                    if (x <= g.front()) return 0.0;
                    if (x >= g.back()) return 1.0;
                    auto it = std::upper_bound(g.begin(), g.end(), x);
                    std::size_t j = std::size_t(it - g.begin());
                    double u = (x - g[j - 1]) / (g[j] - g[j - 1]);
                    return (1 - u) * F[j - 1] + u * F[j];
                };
                std::vector<double> d(xs.size());
                for (std::size_t i = 0; i < xs.size(); ++i)
                    d[i] = std::abs(eval(a.grid, Fa, xs[i]) - eval(b.grid, Fb, xs[i]));
                w1 = sf::trapezoid(xs, d);
            }
            std::cout << "{\"l1\":" << sf::format17(l1) << ",\"w1\":" << sf::format17(w1)
                      << ",\"sup\":" << sf::format17(sup) << "}\n";
            return 0;
        }
    } catch (const sf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sf::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
