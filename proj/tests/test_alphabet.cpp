#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "detcap/alphabet.hpp"
#include "detcap/placement.hpp"

using namespace detcap;

TEST_CASE("miss moments match hand values") {
  const ConfigAlphabet point({0.5});
  CHECK(point.miss_moment(3) == doctest::Approx(0.125).epsilon(1e-14));

  const ConfigAlphabet two({0.2, 0.8});
  CHECK(two.miss_moment(1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(two.miss_moment(2) == doctest::Approx(0.34).epsilon(1e-14));
  CHECK(two.miss_moment(3) == doctest::Approx(0.26).epsilon(1e-14));

  CHECK_THROWS_AS((void)two.miss_moment(0), std::invalid_argument);
  CHECK_THROWS_AS((void)two.miss_moment(-1), std::invalid_argument);
}

TEST_CASE("weighted average detection probability") {
  CHECK(ConfigAlphabet({0.2, 0.8}).p_average() == doctest::Approx(0.5));
  CHECK(ConfigAlphabet({0.5}).p_average() == doctest::Approx(0.5));
  CHECK(ConfigAlphabet({0.1, 0.3, 0.5}).p_average() == doctest::Approx(0.3));
  CHECK(ConfigAlphabet({0.1, 0.9}, {0.25, 0.75}).p_average() ==
        doctest::Approx(0.7));
  CHECK(ConfigAlphabet({0.1, 0.3, 0.5}).p_min() == doctest::Approx(0.1));
}

TEST_CASE("alphabet validation") {
  CHECK_THROWS_AS(ConfigAlphabet({}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigAlphabet({0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigAlphabet({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigAlphabet({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigAlphabet({0.2, 0.8}, {0.7, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigAlphabet({0.2, 0.8}, {-0.2, 1.2}), std::invalid_argument);
}

TEST_CASE("degenerate alphabet sampling") {
  const ConfigAlphabet point({0.5});
  RngStream rng = RngStream::derive(7, StreamDomain::Config, 0);
  const Configuration cfg = point.sample_configuration(5, rng);
  for (double p : cfg.probs) CHECK(p == 0.5);
}

TEST_CASE("sampling is deterministic per stream") {
  const ConfigAlphabet two({0.2, 0.8});
  RngStream a = RngStream::derive(42, StreamDomain::Config, 3);
  RngStream b = RngStream::derive(42, StreamDomain::Config, 3);
  const Configuration ca = two.sample_configuration(10, a);
  const Configuration cb = two.sample_configuration(10, b);
  CHECK(ca.probs == cb.probs);
  CHECK(ca.letters == cb.letters);
}

TEST_CASE("empirical letter frequency obeys the law of large numbers") {
  const ConfigAlphabet two({0.2, 0.8});
  double freq_sum = 0.0;
  const int seeds = 10, n = 1000000;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng = RngStream::derive(1000 + s, StreamDomain::Config, 0);
    const Configuration cfg = two.sample_configuration(n, rng);
    int low = 0;
    for (double p : cfg.probs)
      if (p == 0.2) ++low;
    freq_sum += static_cast<double>(low) / n;
  }
  const double freq = freq_sum / seeds;
  CHECK(freq > 0.499);
  CHECK(freq < 0.501);
}

TEST_CASE("placement quantizes distance-attenuated probabilities") {
  const ConfigAlphabet grid({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  GeometricPlacement placement;
  placement.alphabet = &grid;
  placement.attenuation = GeometricPlacement::default_attenuation;

  placement.positions = {{0.0, 0.0}};
  CHECK(place_and_quantize(placement).probs[0] == doctest::Approx(0.9));

  placement.positions = {{0.5, 0.5}};  // distance sqrt(.5) ~ 0.7071
  CHECK(place_and_quantize(placement).probs[0] == doctest::Approx(0.3));

  placement.positions = {{0.5, 0.5}, {-0.5, 0.5}, {0.5, -0.5}, {-0.5, -0.5}};
  const Configuration corners = place_and_quantize(placement);
  for (double p : corners.probs) CHECK(p == doctest::Approx(corners.probs[0]));

  placement.positions = {{0.6, 0.0}};
  CHECK_THROWS_AS(place_and_quantize(placement), std::invalid_argument);

  placement.positions = {{0.0, 0.0}};
  placement.attenuation = [](double) { return 1.5; };
  CHECK_THROWS_AS(place_and_quantize(placement), std::runtime_error);
}
