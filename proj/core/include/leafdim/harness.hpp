#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "leafdim/io.hpp"

namespace leafdim {

// The inequalities and identities the suite checks against the estimators.
enum class Claim {
  A1CompactUpperBound,     // h^u_H(f,K) <= h^u(f,K) for compact leaf subsets
  A2MeasureLowerBound,     // h^u_m(f) <= h^u_H(f,Y) for positive-measure Y
  A3Equality,              // h^u_H(f) = h^u_top(f)
  L32aInvariance,          // critical exponent invariant under f
  L32bUnion,               // exponent of a union = max of exponents
  L32cPower,               // exponent under f^m = m * exponent under f
  L33Subadditivity,        // outer measure subadditive on unions
  RemarkInverseAsymmetry,  // estimate(f^-1) = -log lambda^s < estimate(f)
  SmbLimit,                // mean I_n/n -> log lambda^u
  VariationalConsistency,  // h^u_Leb <= h^u_top estimate (+ tolerance)
};

const char* claim_name(Claim claim);
std::optional<Claim> claim_from_name(const std::string& name);

enum class Verdict { Pass, Fail, Indeterminate };
const char* verdict_name(Verdict verdict);

struct VerificationCase {
  std::string name;
  std::string system = "cat2";
  std::string set = "torus";
  Claim claim = Claim::A3Equality;
  double tolerance = 0.05;
  std::uint64_t seed = 20200828;
  int samples = 8;  // randomized instances for the sampled claims
};

struct CaseResult {
  VerificationCase definition;
  Verdict verdict = Verdict::Indeterminate;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
  nlohmann::json diagnostics;
};

struct SuiteConfig {
  std::vector<VerificationCase> cases;
  ExperimentConfig defaults;  // estimator parameters shared by the cases
};

struct SuiteReport {
  std::vector<CaseResult> results;
  int passed = 0;
  int failed = 0;
  int indeterminate = 0;

  // 0 all pass, 1 any fail, 2 no fail but some indeterminate.
  int exit_code() const;
  nlohmann::json to_json() const;
  std::string summary_table() const;
};

// Inequality claims pass with +tolerance slack on the side the estimator can
// err toward; equality claims pass when |lhs - rhs| <= tolerance*max(1,rhs).
// Estimator warnings (non-stabilized meshes, indeterminate trends) yield an
// Indeterminate verdict, never a silent pass.
CaseResult run_case(const VerificationCase& vcase, const ExperimentConfig& defaults);

SuiteReport run_suite(const SuiteConfig& config);

// All ten claim kinds on cat2 and paper3(5), including the inverse-splitting
// cases. The suite asserts its own coverage of the claim list.
SuiteConfig default_suite();

SuiteConfig suite_config_from_json(const nlohmann::json& j);
nlohmann::json suite_config_to_json(const SuiteConfig& config);

}  // namespace leafdim
