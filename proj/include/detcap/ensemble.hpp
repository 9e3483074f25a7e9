#pragma once
// Configuration-ensemble statistics: Monte Carlo over iid configurations of
// the quenched detection time T(p) and success probability S(p), exact
// configuration-averaged means from the profile route, and the mean /
// variance bound checks those averages must satisfy.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/catalog.hpp"
#include "detcap/bounds.hpp"
#include "detcap/quenched.hpp"

namespace detcap {

// Per-replicate quenched values across sampled configurations.  Replicate i
// draws its configuration from the stream (seed, Config, i); values are
// exact over schemes whenever the family admits a closed form, otherwise
// Monte Carlo over `scheme_samples_fallback` scheme draws per replicate.
struct ReplicateTable {
  std::vector<double> t;  // T(p) per replicate
  std::vector<double> s;  // S(p) per replicate
  // terms[j-1][i] = T_j(p) for replicate i, j = 1..max_term_order
  std::vector<std::vector<double>> terms;
  bool exact = true;
};
ReplicateTable sample_replicates(const SchemeFamily& family,
                                 const ConfigAlphabet& alphabet,
                                 std::int64_t replicates, std::uint64_t seed,
                                 int max_term_order = 0,
                                 std::int64_t scheme_samples_fallback = 2000);

struct SummaryStats {
  double mean = 0.0;
  double se_mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double se_variance = 0.0;
};
SummaryStats summarize(std::span<const double> values);

struct EnsembleReport {
  int n = 0;
  int r = 0;
  std::int64_t replicates = 0;
  double mean_t = 0.0, se_mean_t = 0.0;
  double var_t = 0.0, se_var_t = 0.0;
  double mean_s = 0.0, se_mean_s = 0.0;
  bool quenched_exact = true;
  // Exact configuration-averaged values assembled from miss moments, when
  // the family has a profile route.
  std::optional<double> exact_mean_t;
  std::optional<double> exact_mean_s;
};
EnsembleReport ensemble_report(const SchemeFamily& family,
                               const ConfigAlphabet& alphabet,
                               std::int64_t replicates, std::uint64_t seed);

// Empirical var(T(p)) against the two-sided bound
//   sum_{j<=k} floor(j,j)(1-b_j) - slack  <=  var  <=  (k+1) sum (1-b_j) + slack
// with slack = slack_base + 4 standard errors, plus the per-term check
// var(T_j) in [floor(j,j)(1-b_j), 1-b_j] at the same slack.
struct VarianceSandwich {
  int n = 0, r = 0, k = 0;
  std::int64_t replicates = 0;
  double var_emp = 0.0, se_var = 0.0;
  double floor_sum = 0.0;  // sum_{j<=k} floor(j,j)(1-b_j)
  double cap_sum = 0.0;    // (k+1) sum_{j<=k} (1-b_j)
  double lower = 0.0, upper = 0.0;  // bounds with slack applied
  bool pass_lower = false, pass_upper = false;
  struct Term {
    int j = 0;
    double var_emp = 0.0, se_var = 0.0;
    double floor_j = 0.0, cap_j = 0.0;
    bool pass = false;
  };
  std::vector<Term> terms;
};
VarianceSandwich variance_sandwich_check(const SchemeFamily& family,
                                         const ConfigAlphabet& alphabet, int k,
                                         std::int64_t replicates,
                                         std::uint64_t seed,
                                         double slack_base = 1e-3);

// Convergence of the configuration-averaged mean toward 1/p_av along an
// n-grid, with the verdict predicted from the a_k closed forms.
struct MeanConvergence {
  struct Point {
    int n = 0, r = 0;
    double mean_t = 0.0;
    bool exact = true;
    double se = 0.0;
    double gap = 0.0;  // mean_t - 1/p_av
  };
  std::vector<Point> points;
  double capacity_time = 0.0;
  bool achieves = false;
  bool predicted_achieves = false;
  bool matches_prediction = false;
};
MeanConvergence mean_convergence_check(const FamilySpec& spec,
                                       const ConfigAlphabet& alphabet,
                                       std::span<const int> n_grid,
                                       const RoundSchedule& schedule,
                                       double tol, std::int64_t replicates,
                                       std::uint64_t seed);

}  // namespace detcap
