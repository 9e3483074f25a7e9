#include "detcap/detection.hpp"

#include <stdexcept>

namespace detcap {

namespace {

void check_dims(const Scheme& scheme, const Configuration& config) {
  for (int d : scheme.assignment)
    if (d < 0 || d >= config.size())
      throw std::invalid_argument("scheme index out of configuration range");
}

}  // namespace

SurvivalSequence survival_sequence(const Scheme& scheme,
                                   const Configuration& config) {
  check_dims(scheme, config);
  SurvivalSequence seq;
  seq.values.resize(scheme.assignment.size() + 1);
  seq.values[0] = 1.0;
  double prod = 1.0;
  for (std::size_t t = 0; t < scheme.assignment.size(); ++t) {
    prod *= 1.0 - config.probs[static_cast<std::size_t>(scheme.assignment[t])];
    if (prod < 1e-300) {
      prod = 0.0;
      seq.underflow_clamped = true;
    }
    seq.values[t + 1] = prod;
  }
  return seq;
}

DetectionLaw detection_law(const Scheme& scheme, const Configuration& config) {
  const SurvivalSequence seq = survival_sequence(scheme, config);
  DetectionLaw law;
  law.pmf.resize(scheme.assignment.size());
  for (std::size_t k = 0; k < law.pmf.size(); ++k)
    law.pmf[k] = seq.values[k] - seq.values[k + 1];
  law.miss_mass = seq.values.back();
  return law;
}

double expected_detection_time(const Scheme& scheme,
                               const Configuration& config) {
  const SurvivalSequence seq = survival_sequence(scheme, config);
  const int r = scheme.rounds();
  double sum = 0.0;
  for (int j = 0; j < r; ++j) sum += seq.values[static_cast<std::size_t>(j)];
  return sum - static_cast<double>(r) * seq.values[static_cast<std::size_t>(r)];
}

std::optional<double> conditional_detection_time(const Scheme& scheme,
                                                 const Configuration& config) {
  const DetectionLaw law = detection_law(scheme, config);
  const double s = law.success_probability();
  if (s <= 0.0) return std::nullopt;
  return expected_detection_time(scheme, config) / s;
}

DecisionTrace simulate_round(const Scheme& scheme, const Configuration& config,
                             RngStream& rng) {
  check_dims(scheme, config);
  DecisionTrace trace;
  trace.decisions.resize(scheme.assignment.size());
  for (std::size_t t = 0; t < scheme.assignment.size(); ++t) {
    const double p =
        config.probs[static_cast<std::size_t>(scheme.assignment[t])];
    const bool hit = rng.bernoulli(p);
    trace.decisions[t] = hit ? 1 : 0;
    if (hit && !trace.detection_time)
      trace.detection_time = static_cast<int>(t) + 1;
  }
  return trace;
}

}  // namespace detcap
