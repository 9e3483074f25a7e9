#pragma once
// Exact per-(scheme, configuration) detection law and its simulation twin.
//
// The survival sequence holds the running products of miss probabilities;
// everything else (pmf, success probability, truncated mean) is a linear
// functional of it.

#include <optional>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/rng.hpp"
#include "detcap/scheme.hpp"

namespace detcap {

// values[k] = probability that no detection happened in slots 1..k,
// values[0] = 1.  Strictly positive and nonincreasing.
struct SurvivalSequence {
  std::vector<double> values;
  bool underflow_clamped = false;  // set if a product fell below 1e-300
};

// Law of the detection time within one round: pmf[k-1] = P(T = k) for
// k = 1..r plus the mass of "no detection this round".
struct DetectionLaw {
  std::vector<double> pmf;
  double miss_mass = 0.0;

  double success_probability() const { return 1.0 - miss_mass; }
};

// One simulated round: the per-slot decisions of the assigned detectors and
// the first success slot (1-based), absent when the round misses.
struct DecisionTrace {
  std::vector<std::uint8_t> decisions;
  std::optional<int> detection_time;
};

SurvivalSequence survival_sequence(const Scheme& scheme,
                                   const Configuration& config);

DetectionLaw detection_law(const Scheme& scheme, const Configuration& config);

// E[T 1(T <= r)] = sum_{j=0}^{r-1} alpha_j - r alpha_r; equals sum k pmf[k].
double expected_detection_time(const Scheme& scheme,
                               const Configuration& config);

// E[T | T <= r]; absent when success probability is zero (cannot happen for
// alphabet-valued configurations, but hand-built ones may degenerate).
std::optional<double> conditional_detection_time(const Scheme& scheme,
                                                 const Configuration& config);

DecisionTrace simulate_round(const Scheme& scheme, const Configuration& config,
                             RngStream& rng);

}  // namespace detcap
