#include "detcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detcap/bounds.hpp"
#include "detcap/profile.hpp"

namespace detcap {

// --- catalog -------------------------------------------------------------

int FamilySpec::max_rounds(int n) const {
  switch (kind) {
    case SchemeKind::UniformInjective:
      return n;
    case SchemeKind::HotStart:
      return base_kind == SchemeKind::UniformInjective
                 ? n
                 : std::numeric_limits<int>::max();
    case SchemeKind::BlockRepeat:
      if (base_kind == SchemeKind::UniformInjective) {
        if (n > (std::numeric_limits<int>::max() / block)) {
          return std::numeric_limits<int>::max();
        }
        return block * n;
      }
      return std::numeric_limits<int>::max();
    default:
      return std::numeric_limits<int>::max();
  }
}

namespace {

SchemeFamily make_base(SchemeKind base_kind, int n, int r) {
  switch (base_kind) {
    case SchemeKind::UniformInjective:
      return SchemeFamily::uniform_injective(n, r);
    case SchemeKind::IidUniform:
      return SchemeFamily::iid_uniform(n, r);
    default:
      throw std::invalid_argument(
          "FamilySpec: unsupported base kind (use uniform_injective or "
          "iid_uniform)");
  }
}

Scheme cyclic_scheme(int n, int r) {
  Scheme s;
  s.assignment.resize(static_cast<std::size_t>(r));
  for (int t = 0; t < r; ++t) s.assignment[static_cast<std::size_t>(t)] = t % n;
  return s;
}

}  // namespace

SchemeFamily FamilySpec::make(int n, int r) const {
  switch (kind) {
    case SchemeKind::UniformInjective:
      return SchemeFamily::uniform_injective(n, r);
    case SchemeKind::IidUniform:
      return SchemeFamily::iid_uniform(n, r);
    case SchemeKind::RoundRobin:
      return SchemeFamily::round_robin(n, r, offset);
    case SchemeKind::BlockRepeat: {
      const int u = (r + block - 1) / block;
      return SchemeFamily::block_repeat(block, make_base(base_kind, n, u),
                                        allow_padding, r);
    }
    case SchemeKind::HotStart: {
      if (r == 1) return SchemeFamily::fixed(n, Scheme{{pinned}});
      return SchemeFamily::hot_start(pinned, make_base(base_kind, n - 1, r - 1));
    }
    case SchemeKind::Fixed:
      return SchemeFamily::fixed(n, cyclic_scheme(n, r));
    case SchemeKind::CustomWeighted:
      throw std::invalid_argument(
          "FamilySpec: custom_weighted families cannot be instantiated from "
          "a spec; construct them directly");
  }
  throw std::logic_error("FamilySpec::make: unreachable");
}

std::string FamilySpec::label() const {
  switch (kind) {
    case SchemeKind::BlockRepeat:
      return "block_repeat(" + std::to_string(block) + "," +
             std::string(to_string(base_kind)) + ")";
    case SchemeKind::HotStart:
      return "hot_start(" + std::to_string(pinned + 1) + "," +
             std::string(to_string(base_kind)) + ")";
    case SchemeKind::RoundRobin:
      return offset ? "round_robin@" + std::to_string(*offset) : "round_robin";
    case SchemeKind::Fixed:
      return "fixed_cyclic";
    default:
      return to_string(kind);
  }
}

std::vector<FamilySpec> default_catalog() {
  std::vector<FamilySpec> catalog;
  catalog.push_back({.kind = SchemeKind::UniformInjective});
  catalog.push_back({.kind = SchemeKind::IidUniform});
  catalog.push_back({.kind = SchemeKind::RoundRobin});
  catalog.push_back({.kind = SchemeKind::BlockRepeat,
                     .base_kind = SchemeKind::UniformInjective,
                     .block = 2});
  catalog.push_back({.kind = SchemeKind::HotStart,
                     .base_kind = SchemeKind::UniformInjective,
                     .pinned = 0});
  catalog.push_back({.kind = SchemeKind::Fixed});
  return catalog;
}

// --- achievability -------------------------------------------------------

void AchievabilityTarget::validate() const {
  if (!(s > 0.0)) throw std::invalid_argument("target: s must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("target: epsilon must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("target: delta must be in (0,1)");
}

BMass b_mass_from_table(const ReplicateTable& table,
                        const AchievabilityTarget& target) {
  target.validate();
  std::int64_t hits = 0;
  const std::int64_t n = static_cast<std::int64_t>(table.t.size());
  for (std::int64_t i = 0; i < n; ++i) {
    if (table.s[static_cast<std::size_t>(i)] > 1.0 - target.epsilon &&
        table.t[static_cast<std::size_t>(i)] < target.s + target.delta)
      ++hits;
  }
  BMass out;
  out.replicates = n;
  out.mass = static_cast<double>(hits) / static_cast<double>(n);
  out.se = std::sqrt(out.mass * (1.0 - out.mass) / static_cast<double>(n));
  return out;
}

BMass b_mass(const SchemeFamily& family, const ConfigAlphabet& alphabet,
             const AchievabilityTarget& target, std::int64_t replicates,
             std::uint64_t seed) {
  const ReplicateTable table =
      sample_replicates(family, alphabet, replicates, seed);
  return b_mass_from_table(table, target);
}

SConvergence s_convergence_check(const FamilySpec& spec,
                                 const ConfigAlphabet& alphabet,
                                 std::span<const int> n_grid,
                                 const RoundSchedule& schedule,
                                 std::int64_t replicates, std::uint64_t seed) {
  if (n_grid.empty())
    throw std::invalid_argument("s_convergence_check: empty grid");
  SConvergence sc;
  sc.floor_ok_all = true;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int n = n_grid[gi];
    const int r = spec.rounds_for(schedule, n);
    const SchemeFamily family = spec.make(n, r);

    SConvergence::Point pt;
    pt.n = n;
    pt.r = r;
    pt.am_gm_floor = 1.0 - alphabet.miss_moment(r);
    if (const auto avg = configuration_averaged_survival(family, alphabet)) {
      pt.mean_s = averaged_detection_from_survival(*avg).mean_s;
      pt.exact = true;
    } else {
      const EnsembleReport rep = ensemble_report(
          family, alphabet, replicates,
          mix64(seed ^ (static_cast<std::uint64_t>(gi) + 7)));
      pt.mean_s = rep.mean_s;
      pt.se = rep.se_mean_s;
      pt.exact = false;
    }
    pt.floor_ok = pt.mean_s >= pt.am_gm_floor - 4.0 * pt.se - 1e-12;
    sc.floor_ok_all = sc.floor_ok_all && pt.floor_ok;
    sc.points.push_back(pt);
  }
  sc.top_mean_s = sc.points.back().mean_s;
  return sc;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::AchievesCapacity: return "ACHIEVES_CAPACITY";
    case Verdict::FailsA1: return "FAILS_A1";
    case Verdict::FailsA2: return "FAILS_A2";
    case Verdict::FailsBoth: return "FAILS_BOTH";
  }
  return "unknown";
}

namespace {

// Predicted verdict from the closed forms of a_k and b_k evaluated in the
// large-n regime (Monte Carlo at the top grid size when no closed form).
Verdict predict_verdict(const FamilySpec& spec, const RoundSchedule& schedule,
                        int n_top, std::uint64_t seed) {
  const int n_big = std::max(1000000, n_top);
  const int r_big = spec.rounds_for(schedule, n_big);
  const SchemeFamily big = spec.make(n_big, r_big);
  bool a1 = true, a2 = true;
  for (int k = 1; k <= std::min(3, big.rounds()); ++k) {
    const auto a = big.prefix_distinctness_exact(k);
    const double a_val =
        a ? *a
          : prefix_distinctness(big, k, EstimateMethod::MonteCarlo, 20000, seed)
                .a_k;
    const auto b = big.pairwise_disjointness_exact(k);
    const double b_val =
        b ? *b
          : pairwise_disjointness(big, k, EstimateMethod::MonteCarlo, 20000,
                                  mix64(seed))
                .b_k;
    if (a_val < 0.99) a1 = false;
    if (b_val < 0.99) a2 = false;
  }
  if (a1 && a2) return Verdict::AchievesCapacity;
  if (!a1 && !a2) return Verdict::FailsBoth;
  return a1 ? Verdict::FailsA2 : Verdict::FailsA1;
}

}  // namespace

CapacityVerdict capacity_sweep(const FamilySpec& spec,
                               const ConfigAlphabet& alphabet,
                               std::span<const int> n_grid,
                               const RoundSchedule& schedule,
                               const AchievabilityTarget& target,
                               std::int64_t replicates, std::uint64_t seed,
                               const SweepOptions& options) {
  if (n_grid.empty()) throw std::invalid_argument("capacity_sweep: empty grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("capacity_sweep: grid must be ascending");
  target.validate();

  CapacityVerdict cv;
  cv.family_label = spec.label();
  cv.capacity_time = 1.0 / alphabet.p_average();

  const BoundConstants bc =
      bound_constants(alphabet, options.k_floor, std::min(options.k_floor, 4));

  bool gap_fails_everywhere = true;
  bool var_above_floor_everywhere = true;
  double floor_top = 0.0;

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int n = n_grid[gi];
    const int r = spec.rounds_for(schedule, n);
    const SchemeFamily family = spec.make(n, r);
    const std::uint64_t point_seed =
        mix64(seed ^ (static_cast<std::uint64_t>(gi) * 1000003ULL + 17ULL));

    const ReplicateTable table =
        sample_replicates(family, alphabet, replicates, point_seed);
    const SummaryStats st_t = summarize(table.t);
    const SummaryStats st_s = summarize(table.s);
    const BMass mass = b_mass_from_table(table, target);

    CapacityVerdict::Point pt;
    pt.n = n;
    pt.r = r;
    pt.replicates = replicates;
    pt.mean_t = st_t.mean;
    pt.se_mean = st_t.se_mean;
    pt.var_t = st_t.variance;
    pt.se_var = st_t.se_variance;
    pt.mean_s = st_s.mean;
    pt.mass = mass.mass;
    pt.se_mass = mass.se;

    if (const auto avg = configuration_averaged_survival(family, alphabet)) {
      pt.exact_mean_t = averaged_detection_from_survival(*avg).mean_t;
      pt.gap = *pt.exact_mean_t - cv.capacity_time;
    } else {
      pt.gap = pt.mean_t - cv.capacity_time;
    }

    double floor = 0.0;
    for (int j = 1; j <= std::min(options.k_floor, r); ++j) {
      const auto a = family.prefix_distinctness_exact(j);
      pt.a_k.push_back(a ? *a
                         : prefix_distinctness(family, j,
                                               EstimateMethod::MonteCarlo,
                                               100000, mix64(point_seed ^ 1))
                               .a_k);
      const auto b = family.pairwise_disjointness_exact(j);
      const double b_j =
          b ? *b
            : pairwise_disjointness(family, j, EstimateMethod::MonteCarlo,
                                    100000, mix64(point_seed))
                  .b_k;
      pt.b_k.push_back(b_j);
      floor += bc.floor(j, j) * (1.0 - b_j);
    }
    pt.var_floor = floor;

    const double slack = options.slack_base + 4.0 * pt.se_var;
    if (std::abs(pt.gap) <= target.delta) gap_fails_everywhere = false;
    if (pt.var_t < floor - slack) var_above_floor_everywhere = false;
    if (gi + 1 == n_grid.size()) floor_top = floor;

    cv.points.push_back(pt);

    if (gi + 1 == n_grid.size()) {
      for (double frac : options.converse_fractions) {
        AchievabilityTarget converse = target;
        converse.s = frac * cv.capacity_time;
        const BMass cm = b_mass_from_table(table, converse);
        cv.converse.push_back({frac, cm.mass});
      }
    }
  }

  const auto& top = cv.points.back();
  const double top_slack = options.slack_base + 4.0 * top.se_var;
  const bool mass_ok = top.mass > 1.0 - target.epsilon;
  const bool gap_ok = std::abs(top.gap) <= target.delta;

  if (mass_ok && gap_ok) {
    cv.verdict = Verdict::AchievesCapacity;
  } else {
    const bool a1_fire = gap_fails_everywhere;
    const bool a2_fire = var_above_floor_everywhere &&
                         floor_top - top_slack > 0.0;
    if (a1_fire && a2_fire) cv.verdict = Verdict::FailsBoth;
    else if (a1_fire) cv.verdict = Verdict::FailsA1;
    else if (a2_fire) cv.verdict = Verdict::FailsA2;
    else cv.verdict = gap_ok ? Verdict::FailsA2 : Verdict::FailsA1;
  }

  cv.predicted = predict_verdict(spec, schedule, n_grid.back(), mix64(seed));
  cv.matches_prediction = cv.verdict == cv.predicted;
  return cv;
}

}  // namespace detcap
