#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "detcap/catalog.hpp"
#include "detcap/quenched.hpp"

using namespace detcap;

namespace {

Configuration make_config(std::vector<double> probs) {
  Configuration cfg;
  cfg.probs = std::move(probs);
  return cfg;
}

}  // namespace

TEST_CASE("point-mass family reproduces the per-scheme law") {
  Scheme pi;
  pi.assignment = {2, 0, 1};
  const SchemeFamily fam = SchemeFamily::fixed(3, pi);
  const Configuration cfg = make_config({0.2, 0.5, 0.8});
  const QuenchedStats qs = quenched_stats(fam, cfg, EstimateMethod::Exact);
  CHECK(qs.t_of_p ==
        doctest::Approx(expected_detection_time(pi, cfg)).epsilon(1e-14));
  CHECK(qs.s_of_p ==
        doctest::Approx(detection_law(pi, cfg).success_probability())
            .epsilon(1e-14));
}

TEST_CASE("homogeneous configurations make every family equivalent") {
  const Configuration cfg = make_config(std::vector<double>(5, 0.4));
  double reference = -1.0;
  for (const auto& spec : default_catalog()) {
    const int r = std::min(3, spec.max_rounds(5));
    const SchemeFamily fam = spec.make(5, r);
    if (r != 3) continue;
    const QuenchedStats qs = quenched_stats(fam, cfg, EstimateMethod::Exact);
    if (reference < 0) reference = qs.t_of_p;
    CHECK(qs.t_of_p == doctest::Approx(reference).epsilon(1e-13));
  }
  // matches the truncated geometric closed form
  double closed = 0.0;
  for (int j = 0; j < 3; ++j) closed += std::pow(0.6, j);
  closed -= 3 * std::pow(0.6, 3);
  CHECK(reference == doctest::Approx(closed).epsilon(1e-13));
}

TEST_CASE("closed-form scheme averages match prefix-law enumeration") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RngStream rng = RngStream::derive(2024, StreamDomain::Config, 0);
  const Configuration cfg = alphabet.sample_configuration(6, rng);
  for (const auto& spec : default_catalog()) {
    const int r = std::min(4, spec.max_rounds(6));
    const SchemeFamily fam = spec.make(6, r);
    const auto closed = scheme_averaged_survival(fam, cfg.miss());
    REQUIRE(closed.has_value());
    const auto by_law = scheme_averaged_survival_by_prefix_law(fam, cfg.miss());
    for (std::size_t j = 0; j < closed->size(); ++j)
      CHECK((*closed)[j] == doctest::Approx(by_law[j]).epsilon(1e-12));
  }
}

TEST_CASE("exact quenched values vs large scheme Monte Carlo") {
  const Configuration cfg = make_config({0.2, 0.8, 0.2, 0.8});
  const SchemeFamily fam = SchemeFamily::uniform_injective(4, 3);
  const QuenchedStats exact = quenched_stats(fam, cfg, EstimateMethod::Exact);
  const QuenchedStats mc =
      quenched_stats(fam, cfg, EstimateMethod::MonteCarlo, 1000000, 31337);
  CHECK(std::abs(exact.t_of_p - mc.t_of_p) < 4.0 * mc.se_t + 1e-9);
  CHECK(std::abs(exact.s_of_p - mc.s_of_p) < 4.0 * mc.se_s + 1e-9);
}

TEST_CASE("survival terms") {
  const Configuration cfg = make_config({0.2, 0.5, 0.8});

  const SchemeFamily inj = SchemeFamily::uniform_injective(3, 2);
  const auto t_inj = survival_terms(inj, cfg, 1, EstimateMethod::Exact);
  CHECK(t_inj[0].value == doctest::Approx((0.8 + 0.5 + 0.2) / 3.0).epsilon(1e-14));

  const SchemeFamily hot =
      SchemeFamily::hot_start(0, SchemeFamily::uniform_injective(2, 1));
  const auto t_hot = survival_terms(hot, cfg, 1, EstimateMethod::Exact);
  CHECK(t_hot[0].value == doctest::Approx(0.8).epsilon(1e-14));  // q of pin

  // j=2 on an enumerable case: mean over the 6 ordered distinct pairs
  const auto t2 = survival_terms(inj, cfg, 2, EstimateMethod::Exact);
  const double q0 = 0.8, q1 = 0.5, q2 = 0.2;
  const double by_hand =
      (q0 * q1 + q0 * q2 + q1 * q0 + q1 * q2 + q2 * q0 + q2 * q1) / 6.0;
  CHECK(t2[1].value == doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("evaluator caches by value multiset") {
  const SchemeFamily fam = SchemeFamily::uniform_injective(4, 3);
  const QuenchedEvaluator evaluator(fam);
  REQUIRE(evaluator.has_exact());
  const auto a = evaluator.exact(make_config({0.2, 0.8, 0.2, 0.8}));
  const auto b = evaluator.exact(make_config({0.8, 0.2, 0.8, 0.2}));
  CHECK(a.get() == b.get());  // same multiset, shared cache entry
  const auto c = evaluator.exact(make_config({0.2, 0.2, 0.2, 0.8}));
  CHECK(c.get() != a.get());
  CHECK(a->t_of_p == doctest::Approx(b->t_of_p).epsilon(1e-15));
}

TEST_CASE("hot-start caching keys on the pinned detector separately") {
  const SchemeFamily fam =
      SchemeFamily::hot_start(0, SchemeFamily::uniform_injective(3, 2));
  const QuenchedEvaluator evaluator(fam);
  REQUIRE(evaluator.has_exact());
  // same pin value, same rest multiset (different order) -> identical values
  const auto a = evaluator.exact(make_config({0.2, 0.8, 0.5, 0.2}));
  const auto b = evaluator.exact(make_config({0.2, 0.2, 0.5, 0.8}));
  CHECK(a.get() == b.get());
  // different pin value -> different entry and different T
  const auto c = evaluator.exact(make_config({0.8, 0.2, 0.5, 0.2}));
  CHECK(c.get() != a.get());
  CHECK(c->t_of_p != doctest::Approx(a->t_of_p));

  // and the cached value equals a direct computation
  const QuenchedStats direct = quenched_stats(
      fam, make_config({0.2, 0.8, 0.5, 0.2}), EstimateMethod::Exact);
  CHECK(a->t_of_p == doctest::Approx(direct.t_of_p).epsilon(1e-13));
}

TEST_CASE("block repeat over iid picks uses power sums") {
  const SchemeFamily fam =
      SchemeFamily::block_repeat(2, SchemeFamily::iid_uniform(3, 2));
  const Configuration cfg = make_config({0.2, 0.8, 0.2});
  const auto closed = scheme_averaged_survival(fam, cfg.miss());
  REQUIRE(closed.has_value());
  const double s1 = (0.8 + 0.2 + 0.8) / 3.0;
  const double s2 = (0.64 + 0.04 + 0.64) / 3.0;
  CHECK((*closed)[1] == doctest::Approx(s1).epsilon(1e-14));
  CHECK((*closed)[2] == doctest::Approx(s2).epsilon(1e-14));
  CHECK((*closed)[3] == doctest::Approx(s2 * s1).epsilon(1e-14));
  CHECK((*closed)[4] == doctest::Approx(s2 * s2).epsilon(1e-14));
  const auto by_law = scheme_averaged_survival_by_prefix_law(fam, cfg.miss());
  for (std::size_t j = 0; j < closed->size(); ++j)
    CHECK((*closed)[j] == doctest::Approx(by_law[j]).epsilon(1e-13));
}

TEST_CASE("custom weighted closed form averages its schemes") {
  const SchemeFamily fam = SchemeFamily::custom_weighted(
      3, {Scheme{{0, 1, 2}}, Scheme{{2, 2, 0}}}, {0.3, 0.7});
  const Configuration cfg = make_config({0.2, 0.5, 0.8});
  const auto closed = scheme_averaged_survival(fam, cfg.miss());
  REQUIRE(closed.has_value());
  const double q0 = 0.8, q1 = 0.5, q2 = 0.2;
  CHECK((*closed)[2] ==
        doctest::Approx(0.3 * q0 * q1 + 0.7 * q2 * q2).epsilon(1e-14));
  const auto by_law = scheme_averaged_survival_by_prefix_law(fam, cfg.miss());
  for (std::size_t j = 0; j < closed->size(); ++j)
    CHECK((*closed)[j] == doctest::Approx(by_law[j]).epsilon(1e-14));
}

TEST_CASE("block repeat closed form handles padded rounds") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  RngStream rng = RngStream::derive(555, StreamDomain::Config, 0);
  const Configuration cfg = alphabet.sample_configuration(7, rng);
  const SchemeFamily fam = SchemeFamily::block_repeat(
      3, SchemeFamily::uniform_injective(7, 3), true, 7);  // partial last block
  const auto closed = scheme_averaged_survival(fam, cfg.miss());
  REQUIRE(closed.has_value());
  const auto by_law = scheme_averaged_survival_by_prefix_law(fam, cfg.miss());
  for (std::size_t j = 0; j < closed->size(); ++j)
    CHECK((*closed)[j] == doctest::Approx(by_law[j]).epsilon(1e-12));
}
