// Command line front end: system registry access, estimator invocation,
// verification suite runner, and CSV/JSON export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "leafdim/errors.hpp"
#include "leafdim/harness.hpp"
#include "leafdim/io.hpp"

using nlohmann::json;

namespace {

struct CommonFlags {
  std::string system = "cat2";
  std::string set = "torus";
  std::vector<double> deltas;
  std::vector<int> meshes;
  int n_min = -1;
  int n_max = -1;
  int samples = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tolerance = -1.0;
  long long budget = -1;
  std::string out;
  std::string config_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--system", f.system, "system spec: cat2 | paper3[:k0=N] | matrix:[..]; "
                                        "append :inverse for the f^-1 splitting");
  cmd->add_option("--set", f.set, "subset spec: torus | ball:c=(..),r=.. | points:[..] | orbit:p=(..)");
  cmd->add_option("--delta", f.deltas, "leaf ball radii (repeatable)");
  cmd->add_option("--mesh", f.meshes, "cover meshes per axis (repeatable)");
  cmd->add_option("--n-min", f.n_min, "smallest cover-growth level");
  cmd->add_option("--n-max", f.n_max, "largest cover-growth level");
  cmd->add_option("--samples", f.samples, "random base points for the sup over x");
  cmd->add_option("--seed", f.seed, "RNG seed")->each([&](const std::string&) { f.seed_set = true; });
  cmd->add_option("--tolerance", f.tolerance, "verification tolerance");
  cmd->add_option("--budget", f.budget, "sweep placement budget per series");
  cmd->add_option("--out", f.out, "output directory for CSV/JSON");
  cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
}

leafdim::ExperimentConfig resolve_config(const CommonFlags& f, const CLI::App* cmd) {
  leafdim::ExperimentConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw leafdim::ConfigError("cannot read config file '" + f.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw leafdim::ConfigError("config '" + f.config_path + "': " + e.what());
    }
    c = leafdim::experiment_config_from_json(j);
  }
  if (cmd->count("--system")) c.system = f.system;
  if (cmd->count("--set")) c.set = f.set;
  if (!f.deltas.empty()) c.deltas = f.deltas;
  if (!f.meshes.empty()) c.meshes = f.meshes;
  if (f.n_min >= 0) c.n_min = f.n_min;
  if (f.n_max >= 0) c.n_max = f.n_max;
  if (f.samples >= 0) c.samples = f.samples;
  if (f.seed_set) c.seed = f.seed;
  if (f.tolerance >= 0) c.tolerance = f.tolerance;
  if (f.budget >= 0) c.budget = f.budget;
  if (!f.out.empty()) c.output = f.out;
  c.validate();
  return c;
}

void write_outputs(const leafdim::ExperimentConfig& config, const std::string& kind,
                   const json& summary, const std::vector<std::pair<std::string, std::string>>& csvs) {
  if (config.output.empty()) return;
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  json full{{"kind", kind}, {"config", leafdim::to_json(config)}, {"result", summary}};
  leafdim::write_text_file((dir / "summary.json").string(), full.dump(2) + "\n");
  for (const auto& [name, content] : csvs) {
    leafdim::write_text_file((dir / name).string(), content);
  }
}

int cmd_splitting(const CommonFlags& flags, const CLI::App* cmd) {
  const auto config = resolve_config(flags, cmd);
  const auto sys = leafdim::make_system(config.system);
  std::printf("system %s  matrix %s  det %+d\n", sys.name.c_str(), sys.map.to_string().c_str(),
              sys.map.det_sign());
  for (std::size_t i = 0; i < sys.splitting.eigenvalues.size(); ++i) {
    const auto& v = sys.splitting.eigenvectors[i];
    std::string vec = "(";
    for (int k = 0; k < sys.dim(); ++k) {
      char comp[32];
      std::snprintf(comp, sizeof(comp), "%s%.9g", k ? ", " : "", v[static_cast<std::size_t>(k)]);
      vec += comp;
    }
    vec += ")";
    std::printf("  lambda[%zu] = %.12g  (%s)  v = %s\n", i, sys.splitting.eigenvalues[i],
                leafdim::bundle_label_name(sys.splitting.labels[i]), vec.c_str());
  }
  std::printf("log lambda^u = %.12g\n", sys.log_rate());
  return 0;
}

int cmd_estimate(const std::string& kind, const CommonFlags& flags, const CLI::App* cmd) {
  const auto config = resolve_config(flags, cmd);
  const auto sys = leafdim::make_system(config.system);
  const auto set = leafdim::parse_ambient_set(sys, config.set);
  std::vector<std::pair<std::string, std::string>> csvs;

  if (kind == "utop") {
    const auto r = leafdim::entropy_of_subset_cover_style(sys, set, config.utop_params());
    int idx = 0;
    for (const auto& s : r.series) {
      char name[64];
      std::snprintf(name, sizeof(name), "growth_d%g_m%d_%02d.csv", s.delta, s.cover_mesh, idx++);
      csvs.emplace_back(name, leafdim::growth_series_csv(s));
    }
    write_outputs(config, "utop", leafdim::utop_result_to_json(r), csvs);
    std::printf("h^u estimate (%s on %s): %.6g%s\n", sys.name.c_str(), set.spec.c_str(), r.value,
                r.non_stabilized ? "  [warning: meshes not stabilized]"
                                 : (r.empty_trace ? "  [warning: empty trace]" : ""));
    return 0;
  }
  if (kind == "hdim") {
    const auto r = leafdim::h_unstable_H(sys, set, config.hdim_params());
    int idx = 0;
    for (const auto& c : r.details) {
      char name[64];
      std::snprintf(name, sizeof(name), "trend_%02d.csv", idx++);
      csvs.emplace_back(name, leafdim::trend_csv(c.trend));
    }
    write_outputs(config, "hdim", leafdim::hdim_result_to_json(r), csvs);
    std::printf("h^u_H estimate (%s on %s): %.6g%s\n", sys.name.c_str(), set.spec.c_str(),
                r.value,
                r.status == leafdim::TrendStatus::Indeterminate ? "  [warning: indeterminate]"
                                                                : "");
    return 0;
  }
  if (kind == "metric") {
    const double v = leafdim::metric_entropy_jacobian(sys);
    write_outputs(config, "metric", json{{"value", v}}, csvs);
    std::printf("h^u_m (Lebesgue, exact Jacobian): %.12g\n", v);
    return 0;
  }
  if (kind == "smb") {
    std::vector<int> n_list{10, 15, 20, 25};
    if (config.n_max >= 5) {
      n_list.clear();
      for (int n = 10; n <= config.n_max + 5; n += 5) n_list.push_back(n);
    }
    const auto r = leafdim::smb_convergence_report(sys, std::max(10, config.samples), n_list, 16,
                                                   config.seed);
    csvs.emplace_back("smb.csv", leafdim::smb_csv(r));
    write_outputs(config, "smb", leafdim::smb_report_to_json(r), csvs);
    std::printf("SMB means toward log lambda^u = %.6g:\n", sys.log_rate());
    for (const auto& row : r.rows) {
      std::printf("  n=%-3d mean=%.6g stddev=%.3g\n", row.n, row.mean, row.stddev);
    }
    std::printf("converged: %s\n", r.converged ? "yes" : "no");
    return 0;
  }
  throw leafdim::ConfigError("unknown estimator kind '" + kind + "'");
}

int cmd_verify(const CommonFlags& flags, const CLI::App* cmd) {
  leafdim::SuiteConfig suite;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw leafdim::ConfigError("cannot read config file '" + flags.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw leafdim::ConfigError("config '" + flags.config_path + "': " + e.what());
    }
    suite = leafdim::suite_config_from_json(j);
  } else {
    suite = leafdim::default_suite();
  }
  if (flags.tolerance >= 0) {
    for (auto& c : suite.cases) c.tolerance = flags.tolerance;
  }
  if (flags.seed_set) {
    for (auto& c : suite.cases) c.seed = flags.seed;
  }
  if (flags.budget >= 0) suite.defaults.budget = flags.budget;

  const auto report = leafdim::run_suite(suite);
  std::fputs(report.summary_table().c_str(), stdout);
  if (!flags.out.empty()) {
    const std::filesystem::path dir(flags.out);
    std::filesystem::create_directories(dir);
    leafdim::write_text_file((dir / "report.json").string(), report.to_json().dump(2) + "\n");
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unstable-entropy estimators for linear toral automorphisms"};
  app.require_subcommand(1);

  CommonFlags split_flags, est_flags, verify_flags;
  auto* split_cmd = app.add_subcommand("splitting", "print the eigen-splitting of a system");
  add_common_flags(split_cmd, split_flags);

  auto* est_cmd = app.add_subcommand("estimate", "run an estimator and export series");
  std::string kind;
  est_cmd->add_option("kind", kind, "utop | hdim | metric | smb")->required();
  add_common_flags(est_cmd, est_flags);

  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  add_common_flags(verify_cmd, verify_flags);

  try {
    app.parse(argc, argv);
    if (split_cmd->parsed()) return cmd_splitting(split_flags, split_cmd);
    if (est_cmd->parsed()) return cmd_estimate(kind, est_flags, est_cmd);
    if (verify_cmd->parsed()) return cmd_verify(verify_flags, verify_cmd);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  } catch (const leafdim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
