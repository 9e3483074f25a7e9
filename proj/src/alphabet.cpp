#include "detcap/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detcap {

namespace {
constexpr double kValueMargin = 1e-9;
constexpr double kWeightTol = 1e-12;
}  // namespace

ConfigAlphabet::ConfigAlphabet(std::vector<double> values,
                               std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.empty())
    throw std::invalid_argument("alphabet: needs at least one value");
  if (weights_.empty())
    weights_.assign(values_.size(), 1.0 / static_cast<double>(values_.size()));
  if (weights_.size() != values_.size())
    throw std::invalid_argument("alphabet: weights/values size mismatch");

  double wsum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("alphabet: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kWeightTol)
    throw std::invalid_argument("alphabet: weights must sum to 1");

  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > kValueMargin && v < 1.0 - kValueMargin))
      throw std::invalid_argument(
          "alphabet: values must lie strictly inside (0,1)");
    for (std::size_t j = i + 1; j < values_.size(); ++j)
      if (values_[j] == v)
        throw std::invalid_argument("alphabet: duplicate value");
  }

  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;

  for (std::size_t i = 0; i < values_.size(); ++i) {
    p_av_ += weights_[i] * values_[i];
    p_min_ = std::min(p_min_, values_[i]);
  }
  moments_.push_back(1.0);
}

ConfigAlphabet::ConfigAlphabet(const ConfigAlphabet& other)
    : values_(other.values_),
      weights_(other.weights_),
      cumulative_(other.cumulative_),
      p_av_(other.p_av_),
      p_min_(other.p_min_) {
  std::lock_guard<std::mutex> lock(other.moment_mutex_);
  moments_ = other.moments_;
}

ConfigAlphabet& ConfigAlphabet::operator=(const ConfigAlphabet& other) {
  if (this == &other) return *this;
  values_ = other.values_;
  weights_ = other.weights_;
  cumulative_ = other.cumulative_;
  p_av_ = other.p_av_;
  p_min_ = other.p_min_;
  std::scoped_lock lock(moment_mutex_, other.moment_mutex_);
  moments_ = other.moments_;
  return *this;
}

double ConfigAlphabet::miss_moment(int w) const {
  if (w < 1) throw std::invalid_argument("miss_moment: order must be >= 1");
  std::lock_guard<std::mutex> lock(moment_mutex_);
  while (static_cast<int>(moments_.size()) <= w) {
    const int k = static_cast<int>(moments_.size());
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      m += weights_[i] * std::pow(1.0 - values_[i], k);
    moments_.push_back(m);
  }
  return moments_[static_cast<std::size_t>(w)];
}

Configuration ConfigAlphabet::sample_configuration(int n,
                                                   RngStream& rng) const {
  if (n < 1) throw std::invalid_argument("sample_configuration: n must be >= 1");
  Configuration cfg;
  cfg.probs.resize(static_cast<std::size_t>(n));
  cfg.letters.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int letter = rng.categorical_from_cumulative(cumulative_);
    cfg.letters[static_cast<std::size_t>(i)] = letter;
    cfg.probs[static_cast<std::size_t>(i)] =
        values_[static_cast<std::size_t>(letter)];
  }
  return cfg;
}

int ConfigAlphabet::nearest_index(double raw) const {
  int best = 0;
  double best_gap = std::abs(values_[0] - raw);
  for (std::size_t i = 1; i < values_.size(); ++i) {
    const double gap = std::abs(values_[i] - raw);
    if (gap < best_gap ||
        (gap == best_gap && values_[i] < values_[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
      best_gap = gap;
    }
  }
  return best;
}

double ConfigAlphabet::quantize(double raw) const {
  return values_[static_cast<std::size_t>(nearest_index(raw))];
}

std::map<double, int> value_histogram(std::span<const double> probs) {
  std::map<double, int> hist;
  for (double p : probs) ++hist[p];
  return hist;
}

}  // namespace detcap
