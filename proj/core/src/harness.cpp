#include "leafdim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "leafdim/errors.hpp"

namespace leafdim {

using nlohmann::json;

const char* claim_name(Claim claim) {
  switch (claim) {
    case Claim::A1CompactUpperBound: return "A1_compact_upper_bound";
    case Claim::A2MeasureLowerBound: return "A2_measure_lower_bound";
    case Claim::A3Equality: return "A3_equality";
    case Claim::L32aInvariance: return "L32a_invariance";
    case Claim::L32bUnion: return "L32b_union";
    case Claim::L32cPower: return "L32c_power";
    case Claim::L33Subadditivity: return "L33_subadditivity";
    case Claim::RemarkInverseAsymmetry: return "remark_inverse_asymmetry";
    case Claim::SmbLimit: return "smb_limit";
    case Claim::VariationalConsistency: return "variational_consistency";
  }
  return "?";
}

std::optional<Claim> claim_from_name(const std::string& name) {
  static const std::map<std::string, Claim> table = {
      {"A1_compact_upper_bound", Claim::A1CompactUpperBound},
      {"A2_measure_lower_bound", Claim::A2MeasureLowerBound},
      {"A3_equality", Claim::A3Equality},
      {"L32a_invariance", Claim::L32aInvariance},
      {"L32b_union", Claim::L32bUnion},
      {"L32c_power", Claim::L32cPower},
      {"L33_subadditivity", Claim::L33Subadditivity},
      {"remark_inverse_asymmetry", Claim::RemarkInverseAsymmetry},
      {"smb_limit", Claim::SmbLimit},
      {"variational_consistency", Claim::VariationalConsistency},
  };
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

// Compact-subset estimator pair used by the randomized claims: cover-growth
// entropy and critical exponent on the same subset and mesh family.
struct CompactPair {
  double utop_value = 0.0;
  double hdim_value = 0.0;
  bool non_stabilized = false;
  bool indeterminate = false;
};

CompactPair compact_pair(const System& sys, const LeafSubset& subset,
                         const std::vector<int>& meshes, long long budget) {
  CompactPair out;
  SweepBudget sweep_budget;
  sweep_budget.max_total_placements = budget;
  const auto growth = entropy_of_compact(sys, subset, meshes, 2, 16, sweep_budget);
  out.utop_value = growth.value;
  out.non_stabilized = growth.non_stabilized;
  CriticalExponentParams cp;
  cp.budget.max_total_placements = budget;
  for (int mesh : meshes) {
    const GridCover cover{mesh, kDefaultInflation, sys.dim()};
    const auto ce = critical_exponent(sys, subset, cover, cp);
    if (ce.status == TrendStatus::Indeterminate) out.indeterminate = true;
    out.hdim_value = std::max(out.hdim_value, ce.lambda_star);
  }
  return out;
}

double sup_exponent(const System& sys, const LeafSubset& subset, const std::vector<int>& meshes,
                    long long budget, bool& indeterminate) {
  CriticalExponentParams cp;
  cp.budget.max_total_placements = budget;
  double best = 0.0;
  for (int mesh : meshes) {
    const GridCover cover{mesh, kDefaultInflation, sys.dim()};
    const auto ce = critical_exponent(sys, subset, cover, cp);
    if (ce.status == TrendStatus::Indeterminate) indeterminate = true;
    best = std::max(best, ce.lambda_star);
  }
  return best;
}

// Estimates shared by several cases within one suite run.
struct EstimateCache {
  std::map<std::string, UtopResult> utop;
  std::map<std::string, HdimResult> hdim_torus;

  const UtopResult& utop_of(const System& sys, const ExperimentConfig& defaults) {
    auto it = utop.find(sys.name);
    if (it == utop.end()) {
      it = utop.emplace(sys.name, unstable_topological_entropy(sys, defaults.utop_params()))
               .first;
    }
    return it->second;
  }
  const HdimResult& hdim_of(const System& sys, const ExperimentConfig& defaults) {
    auto it = hdim_torus.find(sys.name);
    if (it == hdim_torus.end()) {
      it = hdim_torus.emplace(sys.name, h_unstable_H(sys, AmbientSet::torus(),
                                                     defaults.hdim_params()))
               .first;
    }
    return it->second;
  }
};

LeafSubset random_compact(const System& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const TorusPoint base = random_rational_point(sys.dim(), rng);
  const double delta = 0.02 + 0.08 * unif(rng);
  const LeafSegment ball = leaf_ball(sys, base, delta);
  if (unif(rng) < 0.5) {
    return LeafSubset::whole_segment(ball);
  }
  // Two disjoint sub-intervals of the ball.
  const double a1 = -delta + 0.3 * delta * unif(rng);
  const double b1 = a1 + 0.2 * delta * (0.2 + unif(rng));
  const double a2 = b1 + 0.2 * delta * (0.2 + unif(rng));
  const double b2 = std::min(delta, a2 + 0.4 * delta * (0.2 + unif(rng)));
  return LeafSubset::from_intervals(ball, {{a1, b1}, {a2, std::max(b2, a2 + 0.05 * delta)}});
}

CaseResult check_inequality(CaseResult result, double lhs, double rhs, double slack) {
  result.lhs = lhs;
  result.rhs = rhs;
  result.verdict = lhs <= rhs + slack ? Verdict::Pass : Verdict::Fail;
  return result;
}

CaseResult check_equality(CaseResult result, double lhs, double rhs, double tolerance) {
  result.lhs = lhs;
  result.rhs = rhs;
  result.verdict =
      std::abs(lhs - rhs) <= tolerance * std::max(1.0, std::abs(rhs)) ? Verdict::Pass
                                                                      : Verdict::Fail;
  return result;
}

}  // namespace

static CaseResult run_case_impl(const VerificationCase& vcase, const ExperimentConfig& defaults,
                                EstimateCache& cache) {
  CaseResult result;
  result.definition = vcase;
  const System sys = make_system(vcase.system);
  std::mt19937_64 rng(vcase.seed);
  const std::vector<int> compact_meshes{8, 16};
  const long long compact_budget = std::min<long long>(defaults.budget, 1'500'000);

  switch (vcase.claim) {
    case Claim::A1CompactUpperBound: {
      double worst_gap = -1e9;
      bool indet = false;
      json rows = json::array();
      for (int i = 0; i < vcase.samples; ++i) {
        const LeafSubset K = random_compact(sys, rng);
        const auto pair = compact_pair(sys, K, compact_meshes, compact_budget);
        indet = indet || pair.indeterminate || pair.non_stabilized;
        worst_gap = std::max(worst_gap, pair.hdim_value - pair.utop_value);
        rows.push_back(json{{"hdim", pair.hdim_value}, {"utop", pair.utop_value}});
      }
      result.diagnostics["instances"] = rows;
      result = check_inequality(std::move(result), worst_gap, 0.0, vcase.tolerance);
      result.detail = "max over compacts of hdim(K) - utop(K)";
      if (indet) result.verdict = Verdict::Indeterminate;
      break;
    }
    case Claim::A2MeasureLowerBound: {
      const AmbientSet Y = parse_ambient_set(sys, vcase.set);
      const double lhs = metric_entropy_jacobian(sys);
      const auto hd = h_unstable_H(sys, Y, defaults.hdim_params());
      result.diagnostics["hdim"] = hdim_result_to_json(hd);
      result = check_inequality(std::move(result), lhs, hd.value, vcase.tolerance);
      result.detail = "h^u_m(f) vs h^u_H(f,Y) on " + vcase.set;
      if (hd.status == TrendStatus::Indeterminate || hd.empty_trace) {
        result.verdict = Verdict::Indeterminate;
      }
      break;
    }
    case Claim::A3Equality: {
      const auto& ut = cache.utop_of(sys, defaults);
      const auto& hd = cache.hdim_of(sys, defaults);
      result.diagnostics["utop"] = utop_result_to_json(ut);
      result.diagnostics["hdim"] = hdim_result_to_json(hd);
      result = check_equality(std::move(result), hd.value, ut.value, vcase.tolerance);
      result.detail = "h^u_H(f) vs h^u_top(f)";
      if (ut.non_stabilized || hd.status == TrendStatus::Indeterminate) {
        result.verdict = Verdict::Indeterminate;
      }
      break;
    }
    case Claim::L32aInvariance: {
      // Small ball so the image segment still fits a usable level window.
      const TorusPoint base = random_rational_point(sys.dim(), rng);
      const LeafSegment ball = leaf_ball(sys, base, 0.02);
      const LeafSubset K = LeafSubset::whole_segment(ball);
      const LeafSubset fK = LeafSubset::whole_segment(iterate_segment(sys, ball, 1));
      bool indet = false;
      const double a = sup_exponent(sys, K, compact_meshes, compact_budget, indet);
      const double b = sup_exponent(sys, fK, compact_meshes, compact_budget, indet);
      result = check_equality(std::move(result), b, a, vcase.tolerance);
      result.detail = "lambda*(f(K)) vs lambda*(K)";
      if (indet) result.verdict = Verdict::Indeterminate;
      break;
    }
    case Claim::L32bUnion: {
      const TorusPoint base = random_rational_point(sys.dim(), rng);
      const LeafSegment ball = leaf_ball(sys, base, 0.1);
      LeafSubset segment_part = LeafSubset::from_intervals(ball, {{-0.1, 0.04}});
      LeafSubset union_set = segment_part;
      std::uniform_real_distribution<double> unif(0.05, 0.1);
      for (int i = 0; i < 5; ++i) union_set.points.push_back(unif(rng));
      union_set.normalize();
      bool indet = false;
      const double seg_val = sup_exponent(sys, segment_part, compact_meshes, compact_budget, indet);
      const double union_val = sup_exponent(sys, union_set, compact_meshes, compact_budget, indet);
      // Point parts carry exponent 0, so the union should match the segment.
      result = check_equality(std::move(result), union_val, std::max(seg_val, 0.0),
                              vcase.tolerance);
      result.detail = "lambda*(segment u points) vs max of parts";
      if (indet) result.verdict = Verdict::Indeterminate;
      break;
    }
    case Claim::L32cPower: {
      const TorusPoint base = random_rational_point(sys.dim(), rng);
      bool indet = false;
      const LeafSubset K1 = LeafSubset::whole_segment(leaf_ball(sys, base, 0.02));
      const double e1 = sup_exponent(sys, K1, {8}, compact_budget, indet);
      const System sys2 = sys.power(2);
      const LeafSubset K2 = LeafSubset::whole_segment(leaf_ball(sys2, base, 0.02));
      const double e2 = sup_exponent(sys2, K2, {8}, compact_budget, indet);
      result = check_equality(std::move(result), e2, 2.0 * e1, vcase.tolerance);
      result.detail = "lambda* under f^2 vs twice lambda* under f";
      if (indet) result.verdict = Verdict::Indeterminate;
      break;
    }
    case Claim::L33Subadditivity: {
      const TorusPoint base = random_rational_point(sys.dim(), rng);
      const LeafSegment ball = leaf_ball(sys, base, 0.1);
      const GridCover cover{16, kDefaultInflation, sys.dim()};
      const double lambda = 0.5 * sys.log_rate();
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      double worst = -1e9;
      for (int i = 0; i < vcase.samples; ++i) {
        const double a1 = -0.1 + 0.08 * unif(rng);
        const double b1 = a1 + 0.03 + 0.04 * unif(rng);
        const double a2 = b1 + 0.01 + 0.03 * unif(rng);
        const double b2 = std::min(0.1, a2 + 0.03 + 0.04 * unif(rng));
        LeafSubset x1 = LeafSubset::from_intervals(ball, {{a1, b1}});
        LeafSubset x2 = LeafSubset::from_intervals(ball, {{a2, b2}});
        LeafSubset both = LeafSubset::from_intervals(ball, {{a1, b1}, {a2, b2}});
        const double mu = outer_measure_approx(sys, both, cover, lambda, 4).value;
        const double m1 = outer_measure_approx(sys, x1, cover, lambda, 4).value;
        const double m2 = outer_measure_approx(sys, x2, cover, lambda, 4).value;
        worst = std::max(worst, mu - (m1 + m2));
      }
      result = check_inequality(std::move(result), worst, 0.0, 1e-9);
      result.detail = "max over pairs of m(X1 u X2) - m(X1) - m(X2)";
      break;
    }
    case Claim::RemarkInverseAsymmetry: {
      const System inv = make_system(vcase.system + ":inverse");
      const auto& est_f = cache.utop_of(sys, defaults);
      const auto& est_inv = cache.utop_of(inv, defaults);
      const double log_lambda_s = std::log(std::abs(sys.splitting.eigenvalues.front()));
      const double log_lambda_c =
          sys.dim() == 3 ? std::log(std::abs(sys.splitting.eigenvalues[1])) : 0.0;
      result.lhs = est_inv.value;
      result.rhs = -log_lambda_s;
      const bool value_ok =
          std::abs(est_inv.value + log_lambda_s) <= vcase.tolerance * std::abs(log_lambda_s);
      const bool strict_ok = est_inv.value < est_f.value;
      const bool identity_ok =
          sys.dim() != 3 ||
          std::abs(est_inv.value - (est_f.value + log_lambda_c)) <= 0.08;
      result.diagnostics = json{{"estimate_f", est_f.value},
                                {"estimate_inverse", est_inv.value},
                                {"minus_log_lambda_s", -log_lambda_s},
                                {"log_lambda_c", log_lambda_c},
                                {"value_ok", value_ok},
                                {"strict_ok", strict_ok},
                                {"identity_ok", identity_ok}};
      result.verdict = value_ok && strict_ok && identity_ok ? Verdict::Pass : Verdict::Fail;
      result.detail = "estimate(f^-1) vs -log lambda^s, strict asymmetry, center identity";
      if (est_f.non_stabilized || est_inv.non_stabilized) {
        result.verdict = Verdict::Indeterminate;
      }
      break;
    }
    case Claim::SmbLimit: {
      const std::vector<int> n_list{10, 15, 20, 25};
      const auto report =
          smb_convergence_report(sys, std::max(10, vcase.samples), n_list, 16, vcase.seed);
      result.diagnostics = smb_report_to_json(report);
      const double target = sys.log_rate();
      result = check_equality(std::move(result), report.rows.back().mean, target,
                              vcase.tolerance);
      result.detail = "mean I_n/n at n=25 vs log lambda^u";
      break;
    }
    case Claim::VariationalConsistency: {
      const auto& ut = cache.utop_of(sys, defaults);
      result = check_inequality(std::move(result), metric_entropy_jacobian(sys), ut.value,
                                vcase.tolerance);
      result.detail = "h^u_Leb(f) vs h^u_top estimate";
      if (ut.non_stabilized) result.verdict = Verdict::Indeterminate;
      break;
    }
  }
  return result;
}

CaseResult run_case(const VerificationCase& vcase, const ExperimentConfig& defaults) {
  EstimateCache cache;
  return run_case_impl(vcase, defaults, cache);
}

int SuiteReport::exit_code() const {
  if (failed > 0) return 1;
  if (indeterminate > 0) return 2;
  return 0;
}

json SuiteReport::to_json() const {
  json cases = json::array();
  for (const auto& r : results) {
    cases.push_back(json{{"name", r.definition.name},
                         {"system", r.definition.system},
                         {"set", r.definition.set},
                         {"claim", claim_name(r.definition.claim)},
                         {"tolerance", r.definition.tolerance},
                         {"seed", r.definition.seed},
                         {"verdict", verdict_name(r.verdict)},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"detail", r.detail},
                         {"diagnostics", r.diagnostics}});
  }
  return json{{"cases", cases},
              {"summary",
               json{{"pass", passed}, {"fail", failed}, {"indeterminate", indeterminate}}}};
}

std::string SuiteReport::summary_table() const {
  std::ostringstream out;
  for (const auto& r : results) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-13s %-34s %-22s lhs=%-11.5g rhs=%-11.5g\n",
                  verdict_name(r.verdict), r.definition.name.c_str(),
                  claim_name(r.definition.claim), r.lhs, r.rhs);
    out << line;
  }
  out << "pass " << passed << ", fail " << failed << ", indeterminate " << indeterminate << "\n";
  return out.str();
}

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  EstimateCache cache;
  for (const auto& vcase : config.cases) {
    CaseResult r = run_case_impl(vcase, config.defaults, cache);
    switch (r.verdict) {
      case Verdict::Pass: ++report.passed; break;
      case Verdict::Fail: ++report.failed; break;
      case Verdict::Indeterminate: ++report.indeterminate; break;
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

SuiteConfig default_suite() {
  SuiteConfig config;
  config.defaults.budget = 1'500'000;
  config.defaults.samples = 2;

  auto add = [&](std::string name, std::string system, std::string set, Claim claim,
                 double tolerance, int samples = 8) {
    VerificationCase c;
    c.name = std::move(name);
    c.system = std::move(system);
    c.set = std::move(set);
    c.claim = claim;
    c.tolerance = tolerance;
    c.samples = samples;
    config.cases.push_back(std::move(c));
  };

  add("a3-cat2", "cat2", "torus", Claim::A3Equality, 0.05);
  add("a3-paper3", "paper3:k0=5", "torus", Claim::A3Equality, 0.05);
  add("a1-cat2", "cat2", "torus", Claim::A1CompactUpperBound, 0.05, 6);
  add("a1-paper3", "paper3:k0=5", "torus", Claim::A1CompactUpperBound, 0.05, 4);
  add("a2-cat2", "cat2", "ball:c=(0.3,0.4),r=0.25", Claim::A2MeasureLowerBound, 0.05);
  add("a2-paper3", "paper3:k0=5", "ball:c=(0.3,0.4,0.1),r=0.25", Claim::A2MeasureLowerBound,
      0.05);
  add("l32a-cat2", "cat2", "torus", Claim::L32aInvariance, 0.05);
  add("l32a-paper3", "paper3:k0=5", "torus", Claim::L32aInvariance, 0.05);
  add("l32b-cat2", "cat2", "torus", Claim::L32bUnion, 0.05);
  add("l32c-cat2", "cat2", "torus", Claim::L32cPower, 0.05);
  add("l33-cat2", "cat2", "torus", Claim::L33Subadditivity, 0.0, 20);
  add("inverse-paper3", "paper3:k0=5", "torus", Claim::RemarkInverseAsymmetry, 0.05);
  // The finite-n information estimate carries an O(log rate / n) deficit
  // (about -2% for cat2 and -4% for paper3 at n = 25), so the suite checks
  // the limit claim at 5%.
  add("smb-cat2", "cat2", "torus", Claim::SmbLimit, 0.05, 40);
  add("smb-paper3", "paper3:k0=5", "torus", Claim::SmbLimit, 0.05, 40);
  add("variational-cat2", "cat2", "torus", Claim::VariationalConsistency, 0.05);
  add("variational-paper3", "paper3:k0=5", "torus", Claim::VariationalConsistency, 0.05);
  add("variational-inverse", "paper3:k0=5:inverse", "torus", Claim::VariationalConsistency,
      0.05);

  // Coverage self-check: every claim kind must appear at least once.
  std::set<Claim> seen;
  for (const auto& c : config.cases) seen.insert(c.claim);
  if (seen.size() != 10) throw Error("default suite does not cover all claim kinds");
  return config;
}

SuiteConfig suite_config_from_json(const json& j) {
  SuiteConfig config;
  try {
    if (j.contains("defaults")) {
      config.defaults = experiment_config_from_json(j.at("defaults"));
    }
    if (!j.contains("cases") || !j.at("cases").is_array()) {
      throw ConfigError("suite config needs a 'cases' array");
    }
    int index = 0;
    for (const auto& cj : j.at("cases")) {
      VerificationCase c;
      if (!cj.contains("claim")) {
        throw ConfigError("case " + std::to_string(index) + " is missing 'claim'");
      }
      const auto claim = claim_from_name(cj.at("claim").get<std::string>());
      if (!claim) {
        throw ConfigError("case " + std::to_string(index) + ": unknown claim '" +
                          cj.at("claim").get<std::string>() + "'");
      }
      c.claim = *claim;
      c.name = cj.value("name", std::string(claim_name(c.claim)) + "-" + std::to_string(index));
      c.system = cj.value("system", std::string("cat2"));
      c.set = cj.value("set", std::string("torus"));
      c.tolerance = cj.value("tolerance", 0.05);
      c.seed = cj.value("seed", std::uint64_t{20200828});
      c.samples = cj.value("samples", 8);
      config.cases.push_back(std::move(c));
      ++index;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("suite config parse: ") + e.what());
  }
  return config;
}

json suite_config_to_json(const SuiteConfig& config) {
  json cases = json::array();
  for (const auto& c : config.cases) {
    cases.push_back(json{{"name", c.name},
                         {"system", c.system},
                         {"set", c.set},
                         {"claim", claim_name(c.claim)},
                         {"tolerance", c.tolerance},
                         {"seed", c.seed},
                         {"samples", c.samples}});
  }
  return json{{"defaults", to_json(config.defaults)}, {"cases", cases}};
}

}  // namespace leafdim
