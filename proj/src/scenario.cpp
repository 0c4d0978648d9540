#include "specflow/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "specflow/circular_jacobi.hpp"
#include "specflow/errors.hpp"

namespace specflow {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kEnsembles = {"gaussian", "chiral", "wishart", "circular", "jacobi"};
const std::set<std::string> kOutputs = {"density", "green", "moments", "support", "mc_compare",
                                        "action"};

EnsembleTag tag_of(const std::string& e) {
    if (e == "gaussian") return EnsembleTag::gaussian;
    if (e == "chiral") return EnsembleTag::chiral;
    if (e == "wishart") return EnsembleTag::wishart;
    if (e == "circular") return EnsembleTag::circular;
    return EnsembleTag::jacobi;
}

}  // namespace

void Scenario::validate() const {
    require(kEnsembles.count(ensemble) == 1, ErrorCode::InvalidArgument,
            "ensemble must be one of gaussian|chiral|wishart|circular|jacobi (field: ensemble)");
    require(tau_hat >= 0, ErrorCode::InvalidArgument, "tau_hat must be >= 0 (field: tau_hat)");
    if (ensemble == "gaussian" || ensemble == "circular")
        require(!has_a_hat, ErrorCode::InvalidArgument,
                "a_hat is not a parameter of the " + ensemble + " ensemble (field: a_hat)");
    require(grid.n >= 2 && grid.max > grid.min, ErrorCode::InvalidArgument,
            "grid needs max > min and n >= 2 (field: grid)");
    for (const auto& o : outputs)
        require(kOutputs.count(o) == 1, ErrorCode::InvalidArgument,
                "unknown output '" + o + "' (field: outputs)");
    if (ensemble == "jacobi")
        require(std::find(outputs.begin(), outputs.end(), "mc_compare") == outputs.end(),
                ErrorCode::InvalidArgument, "mc_compare is not available for the jacobi ensemble");
    initial.validate();
}

Json Scenario::to_json() const {
    Json j;
    j["ensemble"] = ensemble;
    j["tau_hat"] = tau_hat;
    if (has_a_hat) j["a_hat"] = a_hat;
    j["initial"] = measure_to_json(initial);
    j["grid"] = {{"min", grid.min}, {"max", grid.max}, {"n", grid.n}};
    j["outputs"] = outputs;
    j["mc"] = {{"N", mc.N},         {"m", mc.m},       {"n", mc.n},   {"beta", mc.beta},
               {"trials", mc.trials}, {"steps", mc.steps}, {"bins", mc.bins}, {"seed", mc.seed}};
    return j;
}

Scenario Scenario::from_json(const Json& j) {
    Scenario sc;
    try {
        sc.ensemble = j.at("ensemble").get<std::string>();
        sc.tau_hat = j.value("tau_hat", 0.0);
        if (j.contains("a_hat") && !j.at("a_hat").is_null()) {
            sc.a_hat = j.at("a_hat").get<double>();
            sc.has_a_hat = true;
        }
        require(j.contains("initial"), ErrorCode::InvalidArgument,
                "missing field: initial");
        if (j.at("initial").is_string())
            sc.initial = parse_init(j.at("initial").get<std::string>(), sc.ensemble);
        else
            sc.initial = measure_from_json(j.at("initial"));
        if (j.contains("grid")) {
            sc.grid.min = j.at("grid").at("min").get<double>();
            sc.grid.max = j.at("grid").at("max").get<double>();
            sc.grid.n = j.at("grid").at("n").get<std::size_t>();
        }
        if (j.contains("outputs")) sc.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("mc")) {
            const Json& m = j.at("mc");
            sc.mc.N = m.value("N", sc.mc.N);
            sc.mc.m = m.value("m", sc.mc.m);
            sc.mc.n = m.value("n", sc.mc.n);
            sc.mc.beta = m.value("beta", sc.mc.beta);
            sc.mc.trials = m.value("trials", sc.mc.trials);
            sc.mc.steps = m.value("steps", sc.mc.steps);
            sc.mc.bins = m.value("bins", sc.mc.bins);
            sc.mc.seed = m.value("seed", sc.mc.seed);
        }
    } catch (const Json::exception& e) {
        raise(ErrorCode::InvalidArgument, std::string("scenario parse error: ") + e.what());
    }
    sc.validate();
    return sc;
}

SpectralMeasure parse_init(const std::string& text, const std::string& ensemble) {
    const bool chiral_like = (ensemble == "chiral" || ensemble == "wishart");
    const bool circle = (ensemble == "circular" || ensemble == "jacobi");
    const Domain dom = circle ? Domain::circle : Domain::real_line;
    auto split = [&](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto c = s.find(':', pos);
            if (c == std::string::npos) {
                parts.push_back(s.substr(pos));
                break;
            }
            parts.push_back(s.substr(pos, c - pos));
            pos = c + 1;
        }
        return parts;
    };
    const auto parts = split(text);
    require(!parts.empty(), ErrorCode::InvalidArgument, "empty --init");
    const std::string& kind = parts[0];
    try {
        if (kind == "delta") {
            require(parts.size() == 2, ErrorCode::InvalidArgument, "usage: delta:x");
            const double x = std::stod(parts[1]);
            if (chiral_like) return SpectralMeasure::chiral_pair(x);
            if (ensemble == "jacobi") {
                SpectralMeasure m = SpectralMeasure::chiral_pair(x);
                m.domain = Domain::circle;
                return m;
            }
            return SpectralMeasure::delta(x, dom);
        }
        if (kind == "pair") {
            require(parts.size() == 2, ErrorCode::InvalidArgument, "usage: pair:a");
            const double a = std::stod(parts[1]);
            if (chiral_like || ensemble == "jacobi") {
                SpectralMeasure m = SpectralMeasure::chiral_pair(a);
                m.domain = dom;
                return m;
            }
            return SpectralMeasure::symmetric_pair(a);
        }
        if (kind == "uniform") {
            require(parts.size() == 3, ErrorCode::InvalidArgument, "usage: uniform:a:b");
            const double a = std::stod(parts[1]);
            const double b = std::stod(parts[2]);
            if (chiral_like || ensemble == "jacobi") {
                // even extension with unit half-line mass
                require(b > a && a >= 0, ErrorCode::InvalidArgument,
                        "uniform:a:b needs 0 <= a < b for even ensembles");
                std::vector<double> g, v;
                const double h = (b - a) / 400.0;
                const double dens = 1.0 / (b - a);
                for (double x = -b; x <= -a + 1e-15; x += h) {
                    g.push_back(x);
                    v.push_back(dens);
                }
                if (a > 0) {
                    g.push_back(-a + 1e-12);
                    v.push_back(0.0);
                    g.push_back(a - 1e-12);
                    v.push_back(0.0);
                }
                for (double x = a; x <= b + 1e-15; x += h) {
                    g.push_back(x);
                    v.push_back(dens);
                }
                SpectralMeasure m = SpectralMeasure::from_density(std::move(g), std::move(v), dom,
                                                                  Symmetry::even);
                return m;
            }
            return SpectralMeasure::uniform(a, b, 801, 1.0, dom);
        }
        if (kind == "file") {
            require(parts.size() >= 2, ErrorCode::InvalidArgument, "usage: file:path");
            std::string path = text.substr(5);
            std::ifstream is(path);
            require(is.good(), ErrorCode::IoFailure, "cannot open measure file " + path);
            Json j = Json::parse(is);
            return measure_from_json(j);
        }
    } catch (const std::invalid_argument&) {
        raise(ErrorCode::InvalidArgument, "bad number in --init '" + text + "'");
    } catch (const Json::exception& e) {
        raise(ErrorCode::InvalidArgument, std::string("measure file parse: ") + e.what());
    }
    raise(ErrorCode::InvalidArgument, "unknown --init kind '" + kind + "'");
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidMeasure:
        case ErrorCode::InvalidRaneyParams:
        case ErrorCode::InvalidInitialData:
        case ErrorCode::DimensionOrder:
        case ErrorCode::AtomRoundingError:
        case ErrorCode::DiscretizationTooCoarse: return 2;
        case ErrorCode::IoFailure: return 4;
        default: return 3;
    }
}

namespace {

struct FlowContext {
    Scenario sc;
    EnsembleTag tag;

    DensityCurve density(std::span<const double> grid) const {
        const auto ladder = default_eps_ladder();
        if (sc.ensemble == "gaussian")
            return evolve_density({sc.initial, sc.tau_hat}, grid, ladder);
        if (sc.ensemble == "chiral")
            return chiral_density({sc.initial, sc.tau_hat, sc.a_hat}, grid, ladder);
        if (sc.ensemble == "wishart")
            return wishart_density({sc.initial, sc.tau_hat, sc.a_hat}, grid, ladder);
        if (sc.ensemble == "circular")
            return circular_density({sc.initial, sc.tau_hat}, grid, ladder);
        return jacobi_density({sc.initial, sc.tau_hat, sc.a_hat}, grid, ladder);
    }

    Complex green(Complex z) const {
        if (sc.ensemble == "gaussian") return evolve_green({sc.initial, sc.tau_hat}, z).g;
        if (sc.ensemble == "chiral")
            return evolve_green_chiral({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
        if (sc.ensemble == "wishart")
            return wishart_green({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
        if (sc.ensemble == "circular") return circular_green({sc.initial, sc.tau_hat}, z).g;
        return jacobi_green({sc.initial, sc.tau_hat, sc.a_hat}, z).g;
    }
};

std::vector<double> scenario_grid(const Scenario& sc) {
    return linspace(sc.grid.min, sc.grid.max, sc.grid.n);
}

}  // namespace

Json run_scenario(const Scenario& sc, const fs::path& out_dir) {
    sc.validate();
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    auto emit = [&](const fs::path& p, auto&& writer) {
        writer(p);
        written.push_back(p);
    };
    Json report;
    report["meta"] = {{"tool", "specflow"},
                      {"timestamp", std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count()}};
    report["config"] = sc.to_json();
    Json metrics;
    Json artifacts = Json::array();

    try {
        FlowContext ctx{sc, tag_of(sc.ensemble)};
        const std::vector<double> grid = scenario_grid(sc);
        DensityCurve curve;
        bool have_curve = false;
        auto need_curve = [&]() -> DensityCurve& {
            if (!have_curve) {
                curve = ctx.density(grid);
                have_curve = true;
            }
            return curve;
        };

        for (const std::string& out : sc.outputs) {
            if (out == "density") {
                DensityCurve& c = need_curve();
                const fs::path p = out_dir / "density.csv";
                emit(p, [&](const fs::path& q) { write_density_csv(q, c); });
                artifacts.push_back(p.filename().string());
                metrics["density_mass"] = c.mass();
            } else if (out == "green") {
                std::ostringstream os;
                os << "x,g_re,g_im\n";
                const double eps = 1e-6;
                for (double x : grid) {
                    const Complex g = ctx.green(Complex(x, eps));
                    os << format17(x) << "," << format17(g.real()) << "," << format17(g.imag())
                       << "\n";
                }
                const fs::path p = out_dir / "green.csv";
                emit(p, [&](const fs::path& q) { atomic_write(q, os.str()); });
                artifacts.push_back(p.filename().string());
            } else if (out == "moments") {
                DensityCurve& c = need_curve();
                Json table = Json::array();
                for (int k = 0; k <= 4; ++k) table.push_back(moments(c, k));
                metrics["moments"] = table;
            } else if (out == "support") {
                DensityCurve& c = need_curve();
                Json arr = Json::array();
                for (const auto& iv : support_detect(c, 1e-4)) arr.push_back({iv.lo, iv.hi});
                metrics["support"] = arr;
            } else if (out == "mc_compare") {
                EmpiricalSpectrum s;
                if (sc.ensemble == "gaussian") {
                    s = sample_gaussian_flow(sc.mc.N, {sc.initial, sc.tau_hat}, sc.mc.beta,
                                             sc.mc.trials, sc.mc.seed);
                } else if (sc.ensemble == "chiral" || sc.ensemble == "wishart") {
                    s = sample_chiral_flow(sc.mc.m, sc.mc.n, {sc.initial, sc.tau_hat, sc.a_hat},
                                           sc.mc.beta, sc.mc.trials, sc.mc.seed);
                    if (sc.ensemble == "wishart") {
                        for (auto& v : s.values) v *= v;
                        for (auto& t : s.by_trial)
                            for (auto& v : t) v *= v;
                        s.ensemble = EnsembleTag::wishart;
                    }
                } else {
                    const int min_steps = int(std::ceil(50.0 * sc.tau_hat));
                    const int steps = std::max(sc.mc.steps, std::max(1, min_steps));
                    s = sample_circular_flow(sc.mc.N, steps, sc.tau_hat, sc.mc.trials, sc.mc.seed);
                }
                const fs::path pj = out_dir / "spectrum.jsonl";
                emit(pj, [&](const fs::path& q) { write_spectrum_jsonl(q, s); });
                artifacts.push_back(pj.filename().string());
                Histogram h = empirical_histogram(s, sc.mc.bins);
                const fs::path ph = out_dir / "histogram.csv";
                emit(ph, [&](const fs::path& q) { write_histogram_csv(q, h); });
                artifacts.push_back(ph.filename().string());
                DensityCurve& c = need_curve();
                metrics["w1"] = wasserstein1(s, c);
            } else if (out == "action") {
                require(sc.ensemble == "gaussian" || sc.ensemble == "chiral",
                        ErrorCode::InvalidArgument,
                        "action output is available for gaussian and chiral flows");
                require(sc.tau_hat > 0, ErrorCode::InvalidArgument,
                        "action output needs tau_hat > 0");
                // trajectory on [tau/8, tau] (atomic initial slices are not grid
                // representable at t = 0)
                const std::size_t nt = 9;
                const double t0 = sc.tau_hat / 8.0;
                Trajectory tr;
                tr.time_grid = linspace(0.0, sc.tau_hat - t0, nt);
                const bool chiral = sc.ensemble == "chiral";
                std::vector<double> p;
                if (chiral && sc.a_hat > 0) {
                    const std::size_t m = sc.grid.n - (sc.grid.n % 2);
                    const double hi = std::max(std::abs(sc.grid.min), std::abs(sc.grid.max));
                    const double h = 2.0 * hi / double(m);
                    for (std::size_t i = 0; i < m; ++i) p.push_back(-hi + h * (0.5 + double(i)));
                } else {
                    p = grid;
                }
                tr.space_grid = p;
                for (std::size_t it = 0; it < nt; ++it) {
                    const double t = t0 + tr.time_grid[it];
                    DensityCurve slice;
                    Json dummy;
                    if (chiral)
                        slice = chiral_density({sc.initial, t, sc.a_hat}, p);
                    else
                        slice = evolve_density({sc.initial, t}, p);
                    for (std::size_t ix = 0; ix < p.size(); ++ix) {
                        tr.rho.push_back(slice.values[ix]);
                        const Complex z(p[ix], 1e-6);
                        const Complex g = chiral
                                              ? evolve_green_chiral({sc.initial, t, sc.a_hat}, z).g
                                              : evolve_green({sc.initial, t}, z).g;
                        tr.v.push_back(g.real());
                    }
                }
                const fs::path pt = out_dir / "trajectory.json";
                emit(pt, [&](const fs::path& q) { atomic_write(q, trajectory_to_json(tr).dump(2)); });
                artifacts.push_back(pt.filename().string());
                metrics["action"] =
                    chiral ? chiral_action(tr, sc.a_hat) : gaussian_action(tr);
                metrics["action_time_offset"] = t0;
            }
        }
    } catch (...) {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }

    report["metrics"] = metrics;
    report["artifacts"] = artifacts;
    atomic_write(out_dir / "report.json", report.dump(2) + "\n");
    return report;
}

}  // namespace specflow
