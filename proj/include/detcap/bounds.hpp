#pragma once
// Exact covariance structure of survival products over the configuration
// law, and the alphabet-level constants that sandwich the mean and variance
// of the scheme-averaged detection time.
//
// For index tuples i1, i2 the covariance of Q(i1) = prod q_{i} and Q(i2)
// factorizes over multiplicities into miss moments; it vanishes exactly when
// the tuples share no detector.  Minimizing over overlap profiles yields an
// n-free positive floor used by the variance bounds.

#include <span>
#include <vector>

#include "detcap/alphabet.hpp"

namespace detcap {

// delta(i1, i2) = E[Q(i1) Q(i2)] - E[Q(i1)] E[Q(i2)] over iid configurations.
// Tuples hold 0-based detector indices; multiplicities are respected.
double product_covariance(std::span<const int> tuple1,
                          std::span<const int> tuple2,
                          const ConfigAlphabet& alphabet);

// E[Q(i)] = prod over distinct indices of miss_moment(multiplicity).
double product_mean(std::span<const int> tuple, const ConfigAlphabet& alphabet);

struct BoundConstants {
  int order_max = 0;  // j range for gap/spread
  int pair_max = 0;   // j1, j2 range for the covariance floor

  // moment_gap[j] = min_{2<=i<=j} (m_i - m_1^i) / m_1^i, defined for j >= 2.
  std::vector<double> moment_gap;
  // moment_spread[j] = (1-p_min)^j - (1-p_av)^j, defined for j >= 1.
  std::vector<double> moment_spread;
  // covariance_floor[j1][j2] = min over overlap profiles of delta, j1,j2 >= 1.
  std::vector<std::vector<double>> covariance_floor;

  // Single-point alphabets have zero moment gaps; the floor and gap are
  // meaningless there and callers must treat bounds as collapsed.
  bool degenerate = false;

  double floor(int j1, int j2) const {
    return covariance_floor[static_cast<std::size_t>(j1)]
                           [static_cast<std::size_t>(j2)];
  }
};

BoundConstants bound_constants(const ConfigAlphabet& alphabet, int order_max,
                               int pair_max = 4);

}  // namespace detcap
