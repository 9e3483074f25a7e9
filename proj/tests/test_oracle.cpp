#include <doctest.h>

#include <cmath>

#include "detcap/oracle.hpp"
#include "detcap/profile.hpp"

using namespace detcap;

namespace {

Configuration make_config(std::vector<double> probs) {
  Configuration cfg;
  cfg.probs = std::move(probs);
  return cfg;
}

}  // namespace

TEST_CASE("outcome-enumeration pmf on hand examples") {
  Scheme pi;
  pi.assignment = {0, 1};
  const DetectionLaw law = oracle_pmf(pi, make_config({0.5, 0.5}));
  CHECK(law.pmf[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(law.pmf[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(law.miss_mass == doctest::Approx(0.25).epsilon(1e-14));

  Scheme single;
  single.assignment = {1};
  const DetectionLaw one = oracle_pmf(single, make_config({0.2, 0.7}));
  CHECK(one.pmf[0] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(one.miss_mass == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("oracle agrees with the closed-form law on random instances") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  for (int inst = 0; inst < 300; ++inst) {
    RngStream rng = RngStream::derive(4242, StreamDomain::Generic, inst);
    const int n = 2 + rng.uniform_index(5);
    const int r = 1 + rng.uniform_index(10);
    const Configuration cfg = alphabet.sample_configuration(n, rng);
    Scheme pi;
    for (int t = 0; t < r; ++t) pi.assignment.push_back(rng.uniform_index(n));

    const DetectionLaw brute = oracle_pmf(pi, cfg);
    const DetectionLaw closed = detection_law(pi, cfg);
    CHECK(std::abs(brute.miss_mass - closed.miss_mass) < 1e-12);
    for (int k = 0; k < r; ++k)
      CHECK(std::abs(brute.pmf[static_cast<std::size_t>(k)] -
                     closed.pmf[static_cast<std::size_t>(k)]) < 1e-12);
  }
}

TEST_CASE("oracle budgets are hard errors") {
  Scheme pi;
  for (int t = 0; t < 13; ++t) pi.assignment.push_back(0);
  CHECK_THROWS_AS(oracle_pmf(pi, make_config({0.5})), BudgetError);

  OracleBudget tight;
  tight.max_scheme_enum = 10;
  CHECK_THROWS_AS(
      oracle_scheme_support(SchemeFamily::iid_uniform(4, 3), tight),
      BudgetError);
  tight.max_config_enum = 4;
  CHECK_THROWS_AS(oracle_conf_moment(SchemeFamily::iid_uniform(4, 2),
                                     ConfigAlphabet({0.2, 0.8}), 4,
                                     ConfStatistic::MeanT, tight),
                  BudgetError);
}

TEST_CASE("scheme support enumerations carry correct probabilities") {
  const SchemeSupport inj =
      oracle_scheme_support(SchemeFamily::uniform_injective(4, 3));
  CHECK(inj.schemes.size() == 24);
  for (double p : inj.probs) CHECK(p == doctest::Approx(1.0 / 24.0));

  const SchemeSupport iid = oracle_scheme_support(SchemeFamily::iid_uniform(4, 3));
  CHECK(iid.schemes.size() == 64);

  const SchemeSupport hot = oracle_scheme_support(
      SchemeFamily::hot_start(1, SchemeFamily::uniform_injective(3, 2)));
  CHECK(hot.schemes.size() == 6);
  for (const auto& s : hot.schemes) CHECK(s.assignment[0] == 1);
}

TEST_CASE("single-point alphabet has zero configuration variance") {
  const ConfigAlphabet point({0.5});
  const double var = oracle_conf_moment(SchemeFamily::uniform_injective(4, 3),
                                        point, 4, ConfStatistic::VarT);
  CHECK(std::abs(var) < 1e-14);
}

TEST_CASE("profile-route means equal full enumeration") {
  const ConfigAlphabet alphabet({0.2, 0.8});
  const SchemeFamily fam = SchemeFamily::uniform_injective(4, 3);
  const auto avg = configuration_averaged_survival(fam, alphabet);
  REQUIRE(avg.has_value());
  const double exact = averaged_detection_from_survival(*avg).mean_t;
  const double oracle =
      oracle_conf_moment(fam, alphabet, 4, ConfStatistic::MeanT);
  CHECK(exact == doctest::Approx(oracle).epsilon(1e-12));

  const double mean_s_exact = averaged_detection_from_survival(*avg).mean_s;
  const double mean_s_oracle =
      oracle_conf_moment(fam, alphabet, 4, ConfStatistic::MeanS);
  CHECK(mean_s_exact == doctest::Approx(mean_s_oracle).epsilon(1e-12));
}
