#include "leafdim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "leafdim/errors.hpp"

namespace leafdim {

using nlohmann::json;

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
  };
  if (deltas.empty()) fail("deltas", "must list at least one value");
  for (double d : deltas) {
    if (!(d > 0)) fail("deltas", "values must be positive");
  }
  if (meshes.empty()) fail("meshes", "must list at least one value");
  for (int m : meshes) {
    if (m < 2) fail("meshes", "values must be >= 2");
  }
  if (n_min < 1) fail("n_min", "must be >= 1");
  if (n_max < n_min) fail("n_max", "must be >= n_min");
  if (n_max > kDefaultNMax) fail("n_max", "must be <= " + std::to_string(kDefaultNMax));
  if (samples < 0) fail("samples", "must be >= 0");
  if (!(tolerance >= 0)) fail("tolerance", "must be >= 0");
  if (budget < 1000) fail("budget", "must be >= 1000");
}

UtopParams ExperimentConfig::utop_params() const {
  UtopParams p;
  p.deltas = deltas;
  p.meshes = meshes;
  p.n_lo = n_min;
  p.n_hi = n_max;
  p.sample_points = samples;
  p.seed = seed;
  p.budget.max_total_placements = budget;
  return p;
}

HdimParams ExperimentConfig::hdim_params() const {
  HdimParams p;
  p.deltas = deltas;
  // The exponent estimator needs headroom above its level window; large
  // meshes exhaust the placement budget before the window fills.
  p.meshes.clear();
  for (int m : meshes) {
    if (m <= 32) p.meshes.push_back(m);
  }
  if (p.meshes.empty()) p.meshes.push_back(meshes.front());
  p.sample_points = samples;
  p.seed = seed;
  p.exponent.budget.max_total_placements = budget;
  p.exponent.n_hi = std::min(n_max, 12);
  return p;
}

json to_json(const ExperimentConfig& c) {
  return json{{"system", c.system}, {"set", c.set},         {"deltas", c.deltas},
              {"meshes", c.meshes}, {"n_min", c.n_min},     {"n_max", c.n_max},
              {"samples", c.samples}, {"seed", c.seed},     {"tolerance", c.tolerance},
              {"budget", c.budget}, {"output", c.output}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("system")) c.system = j.at("system").get<std::string>();
    if (j.contains("set")) c.set = j.at("set").get<std::string>();
    if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
    if (j.contains("meshes")) c.meshes = j.at("meshes").get<std::vector<int>>();
    if (j.contains("n_min")) c.n_min = j.at("n_min").get<int>();
    if (j.contains("n_max")) c.n_max = j.at("n_max").get<int>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("budget")) c.budget = j.at("budget").get<long long>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  c.validate();
  return c;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json growth_series_to_json(const GrowthSeries& s) {
  json points = json::array();
  for (std::size_t i = 0; i < s.ns.size(); ++i) {
    points.push_back(json{{"n", s.ns[i]}, {"count", s.counts[i]}, {"log_count", s.log_counts[i]}});
  }
  return json{{"mesh", s.cover_mesh},
              {"delta", s.delta},
              {"base", s.base_point},
              {"slope", s.slope},
              {"stderr", s.slope_stderr},
              {"window", json::array({s.window_lo, s.window_hi})},
              {"budget_capped", s.budget_capped},
              {"points", points}};
}

json utop_result_to_json(const UtopResult& r) {
  json deltas = json::array();
  for (const auto& [d, v] : r.delta_values) {
    deltas.push_back(json{{"delta", d}, {"value", v}});
  }
  json series = json::array();
  for (const auto& s : r.series) series.push_back(growth_series_to_json(s));
  return json{{"value", r.value},
              {"non_stabilized", r.non_stabilized},
              {"empty_trace", r.empty_trace},
              {"delta_values", deltas},
              {"series", series}};
}

json hdim_result_to_json(const HdimResult& r) {
  json deltas = json::array();
  for (const auto& [d, v] : r.delta_values) {
    deltas.push_back(json{{"delta", d}, {"value", v}});
  }
  json details = json::array();
  for (const auto& c : r.details) {
    details.push_back(json{{"lambda_star", c.lambda_star},
                           {"bracket", json::array({c.bracket.first, c.bracket.second})},
                           {"status", c.status == TrendStatus::Ok ? "ok" : "indeterminate"},
                           {"note", c.note}});
  }
  return json{{"value", r.value},
              {"status", r.status == TrendStatus::Ok ? "ok" : "indeterminate"},
              {"empty_trace", r.empty_trace},
              {"delta_values", deltas},
              {"details", details}};
}

json smb_report_to_json(const SmbReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"n", row.n},
                        {"mean_In_over_n", row.mean},
                        {"stddev", row.stddev},
                        {"samples", row.samples}});
  }
  return json{{"mesh", r.mesh_count}, {"converged", r.converged}, {"rows", rows}};
}

std::string growth_series_csv(const GrowthSeries& s) {
  std::string out = "n,count,log_count\n";
  for (std::size_t i = 0; i < s.ns.size(); ++i) {
    out += std::to_string(s.ns[i]);
    out += ",";
    out += std::to_string(s.counts[i]);
    out += ",";
    out += format_double(s.log_counts[i]);
    out += "\n";
  }
  return out;
}

std::string trend_csv(const std::vector<TrendRow>& rows) {
  std::string out = "N,lambda,inf_weight\n";
  for (const auto& r : rows) {
    out += std::to_string(r.scale_n);
    out += ",";
    out += format_double(r.lambda);
    out += ",";
    out += format_double(r.inf_weight);
    out += "\n";
  }
  return out;
}

std::string smb_csv(const SmbReport& r) {
  std::string out = "n,mean_In_over_n,stddev,samples\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n);
    out += ",";
    out += format_double(row.mean);
    out += ",";
    out += format_double(row.stddev);
    out += ",";
    out += std::to_string(row.samples);
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << content;
}

}  // namespace leafdim
