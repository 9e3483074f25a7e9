#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "detcap/quenched.hpp"
#include "detcap/capacity.hpp"
#include "detcap/ensemble.hpp"
#include "detcap/bounds.hpp"
#include "detcap/oracle.hpp"

using namespace detcap;

TEST_CASE("single-point alphabet: no configuration randomness") {
  const ConfigAlphabet point({0.5});
  const SchemeFamily fam = SchemeFamily::uniform_injective(16, 8);
  const EnsembleReport rep = ensemble_report(fam, point, 200, 9);
  CHECK(rep.var_t == doctest::Approx(0.0).epsilon(1e-15));
  double closed = 0.0;
  for (int j = 0; j < 8; ++j) closed += std::pow(0.5, j);
  closed -= 8 * std::pow(0.5, 8);
  CHECK(rep.mean_t == doctest::Approx(closed).epsilon(1e-12));
  REQUIRE(rep.exact_mean_t.has_value());
  CHECK(*rep.exact_mean_t == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("monte carlo ensemble mean matches the exact profile mean") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  const SchemeFamily fam = SchemeFamily::uniform_injective(32, 5);
  const EnsembleReport rep = ensemble_report(fam, alphabet, 20000, 1234);
  REQUIRE(rep.exact_mean_t.has_value());
  CHECK(std::abs(rep.mean_t - *rep.exact_mean_t) < 4.0 * rep.se_mean_t + 1e-9);
  CHECK(rep.quenched_exact);
}

TEST_CASE("ensemble matches full configuration enumeration at small sizes") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  const SchemeFamily fam = SchemeFamily::iid_uniform(4, 3);
  const double mean_oracle =
      oracle_conf_moment(fam, alphabet, 4, ConfStatistic::MeanT);
  const double var_oracle =
      oracle_conf_moment(fam, alphabet, 4, ConfStatistic::VarT);
  const EnsembleReport rep = ensemble_report(fam, alphabet, 20000, 77);
  CHECK(std::abs(rep.mean_t - mean_oracle) < 4.0 * rep.se_mean_t + 1e-9);
  CHECK(std::abs(rep.var_t - var_oracle) < 4.0 * rep.se_var_t + 1e-9);
}

TEST_CASE("variance sandwich holds on a small instance") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  const SchemeFamily fam = SchemeFamily::uniform_injective(100, 10);
  const VarianceSandwich vs = variance_sandwich_check(fam, alphabet, 3, 20000, 5);
  CHECK(vs.pass_lower);
  CHECK(vs.pass_upper);
  for (const auto& term : vs.terms) CHECK(term.pass);
}

TEST_CASE("families without a closed route fall back to scheme Monte Carlo") {
  // A cyclic base under block repetition has no closed scheme-average; the
  // replicate table must switch to per-configuration scheme sampling and
  // still agree with the budgeted prefix-law route.
  const ConfigAlphabet two({0.2, 0.8});
  const SchemeFamily fam =
      SchemeFamily::block_repeat(2, SchemeFamily::round_robin(6, 2));
  RngStream rng = RngStream::derive(7, StreamDomain::Config, 0);
  const Configuration cfg = two.sample_configuration(6, rng);
  CHECK_FALSE(scheme_averaged_survival(fam, cfg.miss()).has_value());

  // quenched exact mode silently takes the prefix-law route
  const QuenchedStats exact = quenched_stats(fam, cfg, EstimateMethod::Exact);
  const QuenchedStats mc =
      quenched_stats(fam, cfg, EstimateMethod::MonteCarlo, 200000, 99);
  CHECK(std::abs(exact.t_of_p - mc.t_of_p) < 4.0 * mc.se_t + 1e-9);

  const EnsembleReport rep = ensemble_report(fam, two, 300, 17);
  CHECK_FALSE(rep.quenched_exact);
  CHECK(rep.mean_t > 0.0);
}

TEST_CASE("round schedules") {
  RoundSchedule sq;  // sqrt
  CHECK(sq.rounds_for(10000) == 100);
  CHECK(sq.rounds_for(1000) == 31);
  CHECK(sq.rounds_for(1) == 1);
  RoundSchedule lg;
  lg.rule = RoundSchedule::Rule::Log;
  lg.log_c = 2.0;
  CHECK(lg.rounds_for(1000) == static_cast<int>(std::ceil(2.0 * std::log(1000.0))));
  RoundSchedule fx;
  fx.rule = RoundSchedule::Rule::Fixed;
  fx.fixed_r = 50;
  CHECK(fx.rounds_for(7) == 50);
  // injective families clamp to n
  FamilySpec inj{.kind = SchemeKind::UniformInjective};
  CHECK(inj.rounds_for(fx, 7) == 7);
}

TEST_CASE("variance sandwich collapses on a single-point alphabet") {
  const ConfigAlphabet point({0.5});
  const SchemeFamily fam = SchemeFamily::uniform_injective(50, 7);
  const VarianceSandwich vs = variance_sandwich_check(fam, point, 3, 500, 2);
  CHECK(vs.var_emp == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(vs.floor_sum == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(vs.pass_lower);
  CHECK(vs.pass_upper);
}

TEST_CASE("fixed scheme variance exceeds the full covariance floor") {
  // b_j = 0 for a point-mass family, so the floor keeps its full weight.
  const ConfigAlphabet two({0.2, 0.8});
  Scheme pi;
  for (int t = 0; t < 12; ++t) pi.assignment.push_back(t % 4);
  const SchemeFamily fam = SchemeFamily::fixed(4, pi);
  const double var =
      oracle_conf_moment(fam, two, 4, ConfStatistic::VarT);
  const BoundConstants bc = bound_constants(two, 3, 3);
  double floor = 0.0;
  for (int j = 1; j <= 3; ++j) {
    CHECK(*fam.pairwise_disjointness_exact(j) == 0.0);
    floor += bc.floor(j, j);
  }
  CHECK(var > 0.0);
  CHECK(var > floor - 1e-3);
}

TEST_CASE("injective variance cap shrinks like the disjointness defect") {
  const SchemeFamily fam = SchemeFamily::uniform_injective(10000, 100);
  double cap = 0.0;
  for (int j = 1; j <= 3; ++j)
    cap += 1.0 - *fam.pairwise_disjointness_exact(j);
  CHECK(4.0 * cap < 0.01);
}

TEST_CASE("per-configuration success beats the worst-detector bound") {
  const ConfigAlphabet two({0.2, 0.8});
  const double qmax = 1.0 - two.p_min();
  for (const auto& spec : default_catalog()) {
    const int r = std::min(10, spec.max_rounds(50));
    const SchemeFamily fam = spec.make(50, r);
    const ReplicateTable table = sample_replicates(fam, two, 50, 33);
    for (double s : table.s) CHECK(s >= 1.0 - std::pow(qmax, r) - 1e-12);
  }
}

TEST_CASE("b-mass trivial and converse cases") {
  // Degenerate configuration law: every configuration is inside B.
  const ConfigAlphabet point({0.5});
  const SchemeFamily fam = SchemeFamily::uniform_injective(64, 50);
  AchievabilityTarget target;
  target.s = 2.0;
  target.epsilon = 0.01;
  target.delta = 0.01;
  const BMass mass = b_mass(fam, point, target, 500, 3);
  CHECK(mass.mass == doctest::Approx(1.0));

  // Below-capacity target: the mass collapses.
  const ConfigAlphabet two({0.2, 0.8});
  const SchemeFamily big = SchemeFamily::uniform_injective(1000, 31);
  AchievabilityTarget low;
  low.s = 1.8;
  low.epsilon = 0.05;
  low.delta = 0.05;
  const BMass low_mass = b_mass(big, two, low, 2000, 4);
  CHECK(low_mass.mass < 0.05);

  AchievabilityTarget bad;
  bad.s = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("mean convergence verdicts match the distinctness prediction") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RoundSchedule schedule;  // sqrt
  const std::vector<int> grid = {100, 1000, 10000};

  FamilySpec inj{.kind = SchemeKind::UniformInjective};
  const MeanConvergence ok =
      mean_convergence_check(inj, alphabet, grid, schedule, 0.02, 2000, 11);
  CHECK(ok.achieves);
  CHECK(ok.predicted_achieves);
  CHECK(ok.matches_prediction);

  FamilySpec block{.kind = SchemeKind::BlockRepeat,
                   .base_kind = SchemeKind::UniformInjective,
                   .block = 2};
  const MeanConvergence bad =
      mean_convergence_check(block, alphabet, grid, schedule, 0.02, 2000, 12);
  CHECK_FALSE(bad.achieves);
  CHECK_FALSE(bad.predicted_achieves);
  CHECK(bad.matches_prediction);
  CHECK(bad.points.back().gap == doctest::Approx(0.272727).epsilon(1e-3));

  FamilySpec iid{.kind = SchemeKind::IidUniform};
  const MeanConvergence asym =
      mean_convergence_check(iid, alphabet, grid, schedule, 0.02, 2000, 13);
  CHECK(asym.achieves);
  CHECK(asym.matches_prediction);
  CHECK(std::abs(asym.points.back().gap) < 0.02);
}

TEST_CASE("one-slot rounds cannot converge in success probability") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RoundSchedule one;
  one.rule = RoundSchedule::Rule::Fixed;
  one.fixed_r = 1;
  FamilySpec inj{.kind = SchemeKind::UniformInjective};
  const std::vector<int> grid = {10, 100};
  const SConvergence sc =
      s_convergence_check(inj, alphabet, grid, one, 500, 3);
  CHECK(sc.floor_ok_all);
  CHECK(sc.top_mean_s == doctest::Approx(0.5).epsilon(1e-12));  // p_av
}

TEST_CASE("success probability converges under the sqrt schedule") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RoundSchedule schedule;
  FamilySpec inj{.kind = SchemeKind::UniformInjective};
  const std::vector<int> grid = {100, 1000, 10000};
  const SConvergence sc =
      s_convergence_check(inj, alphabet, grid, schedule, 500, 3);
  CHECK(sc.floor_ok_all);
  CHECK(sc.top_mean_s > 0.999);
  // model-level floor at r=50 on this alphabet
  const double floor50 = 1.0 - (std::pow(0.8, 50) + std::pow(0.2, 50)) / 2.0;
  CHECK(floor50 == doctest::Approx(1.0 - 7.13e-6).epsilon(1e-3));
}

TEST_CASE("capacity sweep classifies the catalog") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RoundSchedule schedule;
  AchievabilityTarget target;
  target.s = 2.0;
  const std::vector<int> grid = {100, 1000, 10000};

  FamilySpec hot{.kind = SchemeKind::HotStart,
                 .base_kind = SchemeKind::UniformInjective,
                 .pinned = 0};
  const CapacityVerdict hv =
      capacity_sweep(hot, alphabet, grid, schedule, target, 2000, 21);
  CHECK(hv.verdict == Verdict::FailsA2);
  CHECK(hv.matches_prediction);

  FamilySpec block{.kind = SchemeKind::BlockRepeat,
                   .base_kind = SchemeKind::UniformInjective,
                   .block = 2};
  const CapacityVerdict bv =
      capacity_sweep(block, alphabet, grid, schedule, target, 2000, 22);
  CHECK(bv.verdict == Verdict::FailsA1);
  CHECK(bv.matches_prediction);

  CHECK_THROWS_AS(capacity_sweep(block, alphabet, std::vector<int>{},
                                 schedule, target, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(capacity_sweep(block, alphabet, std::vector<int>{100, 100},
                                 schedule, target, 100, 1),
                  std::invalid_argument);
}
