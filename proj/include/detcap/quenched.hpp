#pragma once
// Scheme-averaged statistics for a fixed configuration ("quenched" in the
// sense that the configuration is frozen while schemes and decisions are
// averaged out).
//
// For every cataloged family the scheme average of the survival products
// admits an exact polynomial-time route (symmetric-function recurrences for
// sampling without replacement, power sums for iid picks, window products
// for cyclic scans).  The generic fallbacks are prefix-law enumeration
// within a budget and plain Monte Carlo over scheme draws.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/detection.hpp"
#include "detcap/scheme.hpp"

namespace detcap {

// survival[j] = E_sch[alpha_j(Pi, p)] for j = 0..r; exact closed-form route.
// Returns nullopt when the family (or its base nesting) has none.
std::optional<std::vector<double>> scheme_averaged_survival(
    const SchemeFamily& family, std::span<const double> miss);

// Same quantity assembled from the prefix law (budgeted tuple enumeration).
std::vector<double> scheme_averaged_survival_by_prefix_law(
    const SchemeFamily& family, std::span<const double> miss,
    std::int64_t tuple_budget = 10000000);

struct QuenchedStats {
  double t_of_p = 0.0;  // E over schemes of E[T 1(T <= r)]
  double s_of_p = 0.0;  // E over schemes of P(T <= r)
  bool exact = true;
  std::int64_t scheme_samples = 0;
  double se_t = 0.0;
  double se_s = 0.0;
};

// Exact mode uses the closed-form route, then the prefix-law route; throws
// BudgetError when neither fits, instructing the caller to use Monte Carlo.
QuenchedStats quenched_stats(const SchemeFamily& family,
                             const Configuration& config, EstimateMethod method,
                             std::int64_t scheme_samples = 100000,
                             std::uint64_t seed = 1);

struct SurvivalTerm {
  int order = 0;     // j
  double value = 0.0;  // T_j(p) = E_sch alpha_j
};

// T_j for j = 1..max_order.
std::vector<SurvivalTerm> survival_terms(const SchemeFamily& family,
                                         const Configuration& config,
                                         int max_order,
                                         EstimateMethod method,
                                         std::int64_t scheme_samples = 100000,
                                         std::uint64_t seed = 1);

// Exact quenched values with histogram-keyed memoization for families whose
// statistics are invariant under detector relabeling.  Thread-safe; repeated
// configurations with the same value multiset hit the cache.
class QuenchedEvaluator {
 public:
  explicit QuenchedEvaluator(SchemeFamily family);

  bool has_exact() const { return has_exact_; }
  const SchemeFamily& family() const { return family_; }

  struct Values {
    double t_of_p = 0.0;
    double s_of_p = 0.0;
    std::vector<double> survival;  // E_sch alpha_j, j = 0..r
  };

  // Exact values; requires has_exact().
  std::shared_ptr<const Values> exact(const Configuration& config) const;

 private:
  using Key = std::vector<double>;  // canonical histogram encoding

  std::shared_ptr<const Values> compute(std::span<const double> miss) const;

  SchemeFamily family_;
  bool has_exact_ = false;
  bool cacheable_ = false;
  bool hot_start_cacheable_ = false;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const Values>> cache_;
};

}  // namespace detcap
