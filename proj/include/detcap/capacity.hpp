#pragma once
// End-to-end capacity verification: the achievable-set mass
// B(p, s, eps, delta) = {S(p) > 1-eps and T(p) < s+delta}, round-length
// sweeps over an n-grid, and the classification of families as
// capacity-achieving or failing the distinctness / disjointness condition.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/catalog.hpp"
#include "detcap/ensemble.hpp"

namespace detcap {

struct AchievabilityTarget {
  double s = 0.0;          // candidate detection time (slots)
  double epsilon = 0.05;   // tolerance on S(p) and on configuration mass
  double delta = 0.05;     // tolerance on T(p)

  void validate() const;
};

struct BMass {
  double mass = 0.0;
  double se = 0.0;
  std::int64_t replicates = 0;
};

// Fraction of sampled configurations inside B; quenched values are exact
// over schemes whenever available.
BMass b_mass(const SchemeFamily& family, const ConfigAlphabet& alphabet,
             const AchievabilityTarget& target, std::int64_t replicates,
             std::uint64_t seed);

// Same, from an existing replicate table (avoids re-sampling in sweeps).
BMass b_mass_from_table(const ReplicateTable& table,
                        const AchievabilityTarget& target);

// Success-probability convergence along the grid, with the model-level
// lower bound E S >= 1 - E(1-p)^r that holds for every family.
struct SConvergence {
  struct Point {
    int n = 0, r = 0;
    double mean_s = 0.0;
    bool exact = true;
    double se = 0.0;
    double am_gm_floor = 0.0;  // 1 - m_r
    bool floor_ok = false;
  };
  std::vector<Point> points;
  bool floor_ok_all = false;
  double top_mean_s = 0.0;
};
SConvergence s_convergence_check(const FamilySpec& spec,
                                 const ConfigAlphabet& alphabet,
                                 std::span<const int> n_grid,
                                 const RoundSchedule& schedule,
                                 std::int64_t replicates, std::uint64_t seed);

enum class Verdict { AchievesCapacity, FailsA1, FailsA2, FailsBoth };
const char* to_string(Verdict verdict);

struct CapacityVerdict {
  std::string family_label;
  double capacity_time = 0.0;

  struct Point {
    int n = 0, r = 0;
    std::int64_t replicates = 0;
    double mean_t = 0.0, se_mean = 0.0;
    double var_t = 0.0, se_var = 0.0;
    double mean_s = 0.0;
    double mass = 0.0, se_mass = 0.0;
    std::optional<double> exact_mean_t;
    double gap = 0.0;        // exact-or-estimated mean minus 1/p_av
    double var_floor = 0.0;  // covariance floor sum_{j<=k} floor(j,j)(1-b_j)
    std::vector<double> a_k;  // prefix distinctness, k = 1..k_floor
    std::vector<double> b_k;  // pairwise disjointness, k = 1..k_floor
  };
  std::vector<Point> points;

  Verdict verdict = Verdict::AchievesCapacity;
  Verdict predicted = Verdict::AchievesCapacity;
  bool matches_prediction = false;

  // Converse probe: B-mass at s strictly below capacity, top-n only.
  struct ConverseProbe {
    double s_fraction = 0.0;
    double mass = 0.0;
  };
  std::vector<ConverseProbe> converse;
};

struct SweepOptions {
  int k_floor = 3;              // order for the variance floor
  double slack_base = 1e-3;
  std::vector<double> converse_fractions = {0.7, 0.8, 0.9};
};

CapacityVerdict capacity_sweep(const FamilySpec& spec,
                               const ConfigAlphabet& alphabet,
                               std::span<const int> n_grid,
                               const RoundSchedule& schedule,
                               const AchievabilityTarget& target,
                               std::int64_t replicates, std::uint64_t seed,
                               const SweepOptions& options = {});

}  // namespace detcap
