#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "leafdim/hdim.hpp"
#include "leafdim/umetric.hpp"
#include "leafdim/utop.hpp"

namespace leafdim {

// Serializable experiment description shared by the CLI and the harness.
struct ExperimentConfig {
  std::string system = "cat2";
  std::string set = "torus";
  std::vector<double> deltas{0.1, 0.05};
  std::vector<int> meshes{8, 16, 32, 64};
  int n_min = 2;
  int n_max = 20;
  int samples = 2;
  std::uint64_t seed = 20200828;
  double tolerance = 0.05;
  long long budget = 1'500'000;
  std::string output;

  void validate() const;  // throws ConfigError with the offending field
  UtopParams utop_params() const;
  HdimParams hdim_params() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

nlohmann::json growth_series_to_json(const GrowthSeries& s);
nlohmann::json utop_result_to_json(const UtopResult& r);
nlohmann::json hdim_result_to_json(const HdimResult& r);
nlohmann::json smb_report_to_json(const SmbReport& r);

// CSV emission. UTF-8, header row, '.' decimal separator, deterministic
// formatting (%.17g) so identical runs are byte-identical.
std::string growth_series_csv(const GrowthSeries& s);
std::string trend_csv(const std::vector<TrendRow>& rows);
std::string smb_csv(const SmbReport& r);

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace leafdim
