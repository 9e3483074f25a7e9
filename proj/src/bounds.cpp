#include "detcap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "detcap/profile.hpp"

namespace detcap {

double product_mean(std::span<const int> tuple, const ConfigAlphabet& alphabet) {
  std::map<int, int> mult;
  for (int d : tuple) ++mult[d];
  double prod = 1.0;
  for (const auto& [d, c] : mult) prod *= alphabet.miss_moment(c);
  return prod;
}

double product_covariance(std::span<const int> tuple1,
                          std::span<const int> tuple2,
                          const ConfigAlphabet& alphabet) {
  std::map<int, std::pair<int, int>> mult;
  for (int d : tuple1) ++mult[d].first;
  for (int d : tuple2) ++mult[d].second;
  double joint = 1.0, mean1 = 1.0, mean2 = 1.0;
  for (const auto& [d, ab] : mult) {
    joint *= alphabet.miss_moment(ab.first + ab.second);
    if (ab.first > 0) mean1 *= alphabet.miss_moment(ab.first);
    if (ab.second > 0) mean2 *= alphabet.miss_moment(ab.second);
  }
  return joint - mean1 * mean2;
}

namespace {

// Positive compositions of `total` into exactly `parts` entries.
void compositions_rec(int total, int parts, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int first = 1; first + (parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions_rec(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> positive_compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions_rec(total, parts, cur, out);
  return out;
}

// Cheapest product of miss moments over partitions of `weight` (the private
// part of a tuple contributes the smallest factor when all indices are
// distinct, but we enumerate every partition rather than assume it).
double min_private_factor(int weight, const ConfigAlphabet& alphabet) {
  if (weight == 0) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Profile& prof : partitions_of(weight))
    best = std::min(best, profile_moment_product(prof, alphabet));
  return best;
}

}  // namespace

BoundConstants bound_constants(const ConfigAlphabet& alphabet, int order_max,
                               int pair_max) {
  if (order_max < 1) throw std::invalid_argument("bound_constants: order_max");
  if (pair_max < 1) throw std::invalid_argument("bound_constants: pair_max");

  BoundConstants bc;
  bc.order_max = order_max;
  bc.pair_max = pair_max;
  bc.degenerate = alphabet.size() == 1;

  const double m1 = alphabet.miss_moment(1);
  const double qmin_pow_base = 1.0 - alphabet.p_min();

  bc.moment_gap.assign(static_cast<std::size_t>(order_max) + 1, 0.0);
  bc.moment_spread.assign(static_cast<std::size_t>(order_max) + 1, 0.0);
  double running_gap = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= order_max; ++j) {
    bc.moment_spread[static_cast<std::size_t>(j)] =
        std::pow(qmin_pow_base, j) - std::pow(m1, j);
    if (j >= 2) {
      const double mean_pow = std::pow(m1, j);
      running_gap =
          std::min(running_gap, (alphabet.miss_moment(j) - mean_pow) / mean_pow);
      bc.moment_gap[static_cast<std::size_t>(j)] = running_gap;
    }
  }

  // Covariance floor: minimize the exact delta over every overlap profile.
  // A profile chooses h >= 1 shared detectors with multiplicity pairs
  // (a_s, b_s), plus arbitrary partitions for the private remainders.
  bc.covariance_floor.assign(
      static_cast<std::size_t>(pair_max) + 1,
      std::vector<double>(static_cast<std::size_t>(pair_max) + 1, 0.0));
  for (int j1 = 1; j1 <= pair_max; ++j1) {
    for (int j2 = 1; j2 <= pair_max; ++j2) {
      double best = std::numeric_limits<double>::infinity();
      for (int h = 1; h <= std::min(j1, j2); ++h) {
        for (int shared1 = h; shared1 <= j1; ++shared1) {
          for (int shared2 = h; shared2 <= j2; ++shared2) {
            const double private1 =
                min_private_factor(j1 - shared1, alphabet);
            const double private2 =
                min_private_factor(j2 - shared2, alphabet);
            for (const auto& a : positive_compositions(shared1, h)) {
              for (const auto& b : positive_compositions(shared2, h)) {
                double joint = 1.0, ma = 1.0, mb = 1.0;
                for (int s = 0; s < h; ++s) {
                  joint *= alphabet.miss_moment(
                      a[static_cast<std::size_t>(s)] +
                      b[static_cast<std::size_t>(s)]);
                  ma *= alphabet.miss_moment(a[static_cast<std::size_t>(s)]);
                  mb *= alphabet.miss_moment(b[static_cast<std::size_t>(s)]);
                }
                const double delta = private1 * private2 * (joint - ma * mb);
                best = std::min(best, delta);
              }
            }
          }
        }
      }
      bc.covariance_floor[static_cast<std::size_t>(j1)]
                         [static_cast<std::size_t>(j2)] = best;
    }
  }
  return bc;
}

}  // namespace detcap
