#pragma once
// Detection-probability alphabet and realized configurations.
//
// The alphabet is the finite set of admissible per-detector detection
// probabilities together with a sampling law; configurations are iid draws
// from it.  Miss moments E(1-p)^w are the atoms of every exact formula in
// the toolkit, so the alphabet memoizes them.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "detcap/rng.hpp"

namespace detcap {

struct Configuration;

class ConfigAlphabet {
 public:
  // Uniform weights unless given. Values must be distinct and strictly inside
  // (eps, 1-eps) with eps = 1e-9; weights must be nonnegative and sum to 1
  // within 1e-12.  Throws std::invalid_argument otherwise.
  explicit ConfigAlphabet(std::vector<double> values,
                          std::vector<double> weights = {});

  // Copyable despite the mutex-guarded moment cache.
  ConfigAlphabet(const ConfigAlphabet& other);
  ConfigAlphabet& operator=(const ConfigAlphabet& other);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(values_.size()); }

  // Weighted mean detection probability; the capacity is its reciprocal.
  double p_average() const { return p_av_; }
  double p_min() const { return p_min_; }

  // Miss moment m_w = E(1-p)^w, w >= 1. Memoized. Throws for w < 1.
  double miss_moment(int w) const;

  // Convention m_0 = 1 for product formulas over possibly-empty profiles.
  double miss_moment_or_one(int w) const {
    return w == 0 ? 1.0 : miss_moment(w);
  }

  // n iid draws; deterministic given the stream.
  Configuration sample_configuration(int n, RngStream& rng) const;

  // Nearest alphabet value (ties resolve to the smaller value).
  double quantize(double raw) const;
  int nearest_index(double raw) const;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double p_av_ = 0.0;
  double p_min_ = 1.0;
  mutable std::mutex moment_mutex_;
  mutable std::vector<double> moments_;  // moments_[w] = m_w, moments_[0] = 1
};

// A realization p = (p_1,...,p_n).  `letters` carries the alphabet indices
// when the configuration was produced by sampling; it is what the
// exchangeability caches key on.
struct Configuration {
  std::vector<double> probs;
  std::vector<int> letters;  // may be empty for hand-built configurations

  int size() const { return static_cast<int>(probs.size()); }

  // Miss probabilities q_i = 1 - p_i.
  std::vector<double> miss() const {
    std::vector<double> q(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) q[i] = 1.0 - probs[i];
    return q;
  }
};

// Histogram of probability values; canonical cache key for statistics that
// are invariant under detector relabeling.
std::map<double, int> value_histogram(std::span<const double> probs);

}  // namespace detcap
