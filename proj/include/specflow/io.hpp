#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "specflow/action.hpp"
#include "specflow/characteristics.hpp"
#include "specflow/mc_oracle.hpp"
#include "specflow/measures.hpp"

namespace specflow {

using Json = nlohmann::json;

std::string format17(double x);

// write via temp file + rename so partial artifacts never appear
void atomic_write(const std::filesystem::path& path, const std::string& content);

Json measure_to_json(const SpectralMeasure& m);
SpectralMeasure measure_from_json(const Json& j);

std::string density_csv_header(EnsembleTag tag);
void write_density_csv(const std::filesystem::path& path, const DensityCurve& curve);
DensityCurve read_density_csv(const std::filesystem::path& path);

void write_charpath_csv(const std::filesystem::path& path, const CharPath& p);
void write_spectrum_jsonl(const std::filesystem::path& path, const EmpiricalSpectrum& s);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);

Json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const Json& j);

}  // namespace specflow
