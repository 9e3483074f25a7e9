#pragma once
// Brute-force oracles: direct enumeration of the decision, scheme, and
// configuration spaces.  These share no computation with the closed-form
// paths they cross-check; budgets are hard errors, never silent truncation.

#include <cstdint>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/detection.hpp"
#include "detcap/scheme.hpp"

namespace detcap {

struct OracleBudget {
  int max_outcome_rounds = 12;            // cap on 2^r outcome enumerations
  std::int64_t max_config_enum = 1000000;  // cap on |alphabet|^n
  std::int64_t max_scheme_enum = 1000000;  // cap on scheme-support size
};

// Detection law by summing Bernoulli-product weights over all 2^r decision
// outcome strings, binned by first-success position.
DetectionLaw oracle_pmf(const Scheme& scheme, const Configuration& config,
                        const OracleBudget& budget = {});

// Full support of a scheme family with probabilities, by direct recursion on
// the family structure (independent of sampling and closed forms).
struct SchemeSupport {
  std::vector<Scheme> schemes;
  std::vector<double> probs;
};
SchemeSupport oracle_scheme_support(const SchemeFamily& family,
                                    const OracleBudget& budget = {});

enum class ConfStatistic { MeanT, VarT, MeanS };

// Exact configuration-averaged statistics of the scheme-averaged detection
// time / success probability, by enumerating every configuration in
// alphabet^n and every scheme in the family support, with per-scheme values
// from oracle_pmf.
double oracle_conf_moment(const SchemeFamily& family,
                          const ConfigAlphabet& alphabet, int n,
                          ConfStatistic statistic,
                          const OracleBudget& budget = {});

}  // namespace detcap
