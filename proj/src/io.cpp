#include "specflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "specflow/errors.hpp"

namespace specflow {

namespace fs = std::filesystem;

std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        require(os.good(), ErrorCode::IoFailure, "cannot open " + tmp.string());
        os << content;
        os.flush();
        require(os.good(), ErrorCode::IoFailure, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

Json measure_to_json(const SpectralMeasure& m) {
    Json j;
    j["atoms"] = Json::array();
    for (const auto& a : m.atoms) j["atoms"].push_back({a.location, a.weight});
    if (m.has_ac()) j["ac"] = {{"grid", m.ac_grid}, {"values", m.ac_values}};
    j["symmetry"] = to_string(m.symmetry);
    j["domain"] = to_string(m.domain);
    j["mass"] = m.total_mass;
    return j;
}

SpectralMeasure measure_from_json(const Json& j) {
    SpectralMeasure m;
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms")) {
            require(a.is_array() && a.size() == 2, ErrorCode::InvalidMeasure,
                    "measure atoms must be [x, w] pairs");
            m.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
    if (j.contains("ac") && !j.at("ac").is_null()) {
        m.ac_grid = j.at("ac").at("grid").get<std::vector<double>>();
        m.ac_values = j.at("ac").at("values").get<std::vector<double>>();
    }
    const std::string sym = j.value("symmetry", "none");
    require(sym == "even" || sym == "none", ErrorCode::InvalidMeasure,
            "symmetry must be even|none");
    m.symmetry = sym == "even" ? Symmetry::even : Symmetry::none;
    const std::string dom = j.value("domain", "real");
    if (dom == "real")
        m.domain = Domain::real_line;
    else if (dom == "halfline")
        m.domain = Domain::positive_halfline;
    else if (dom == "circle")
        m.domain = Domain::circle;
    else
        raise(ErrorCode::InvalidMeasure, "domain must be real|halfline|circle");
    m.total_mass = j.contains("mass") ? j.at("mass").get<double>() : m.computed_mass();
    m.validate();
    return m;
}

std::string density_csv_header(EnsembleTag tag) {
    switch (tag) {
        case EnsembleTag::chiral: return "x,rho_c";
        case EnsembleTag::wishart: return "y,rho_W";
        case EnsembleTag::circular:
        case EnsembleTag::jacobi: return "phi,rho";
        default: return "x,rho";
    }
}

void write_density_csv(const fs::path& path, const DensityCurve& curve) {
    std::ostringstream os;
    os << density_csv_header(curve.ensemble_tag) << "\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        os << format17(curve.grid[i]) << "," << format17(curve.values[i]) << "\n";
    atomic_write(path, os.str());
}

DensityCurve read_density_csv(const fs::path& path) {
    std::ifstream is(path);
    require(is.good(), ErrorCode::IoFailure, "cannot open " + path.string());
    DensityCurve c;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (!line.empty() && (std::isalpha(line[0]) || line[0] == '#')) continue;
        }
        const auto comma = line.find(',');
        require(comma != std::string::npos, ErrorCode::InvalidArgument,
                "malformed CSV line: " + line);
        c.grid.push_back(std::stod(line.substr(0, comma)));
        c.values.push_back(std::stod(line.substr(comma + 1)));
    }
    require(c.grid.size() >= 2, ErrorCode::InvalidArgument, "CSV has fewer than 2 rows");
    return c;
}

void write_charpath_csv(const fs::path& path, const CharPath& p) {
    std::ostringstream os;
    os << "beta,z_re,z_im,g_re,g_im\n";
    for (const auto& s : p.states)
        os << format17(s.beta) << "," << format17(s.z.real()) << "," << format17(s.z.imag())
           << "," << format17(s.g.real()) << "," << format17(s.g.imag()) << "\n";
    atomic_write(path, os.str());
}

void write_spectrum_jsonl(const fs::path& path, const EmpiricalSpectrum& s) {
    std::ostringstream os;
    for (int t = 0; t < s.trials; ++t) {
        Json row;
        row["trial"] = t;
        row["values"] = s.by_trial[std::size_t(t)];
        os << row.dump() << "\n";
    }
    atomic_write(path, os.str());
}

void write_histogram_csv(const fs::path& path, const Histogram& h) {
    std::ostringstream os;
    os << "bin_lo,bin_hi,mass\n";
    for (std::size_t i = 0; i < h.masses.size(); ++i)
        os << format17(h.bin_edges[i]) << "," << format17(h.bin_edges[i + 1]) << ","
           << format17(h.masses[i]) << "\n";
    atomic_write(path, os.str());
}

Json trajectory_to_json(const Trajectory& t) {
    Json j;
    j["time_grid"] = t.time_grid;
    j["space_grid"] = t.space_grid;
    j["rho"] = t.rho;  // row-major nt x nx
    j["v"] = t.v;
    return j;
}

Trajectory trajectory_from_json(const Json& j) {
    Trajectory t;
    t.time_grid = j.at("time_grid").get<std::vector<double>>();
    t.space_grid = j.at("space_grid").get<std::vector<double>>();
    t.rho = j.at("rho").get<std::vector<double>>();
    t.v = j.at("v").get<std::vector<double>>();
    t.validate();
    return t;
}

}  // namespace specflow
