#include "detcap/quenched.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detcap {

namespace {

// Normalized elementary symmetric means over the values in `x`:
// out[j] = (sum over j-subsets of products) / C(n, j), i.e. the expectation
// of the product over a uniform j-subset.  All intermediates stay in [0,1].
std::vector<double> subset_product_means(std::span<const double> x, int r) {
  const int n = static_cast<int>(x.size());
  std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double xi = x[static_cast<std::size_t>(i - 1)];
    const int jmax = std::min(i, r);
    for (int j = jmax; j >= 1; --j) {
      e[static_cast<std::size_t>(j)] =
          e[static_cast<std::size_t>(j)] * static_cast<double>(i - j) /
              static_cast<double>(i) +
          xi * e[static_cast<std::size_t>(j - 1)] * static_cast<double>(j) /
              static_cast<double>(i);
    }
  }
  return e;
}

// E over ordered distinct (s+1)-tuples of prod_{k<=s} A * B_last, for every
// s = 0..smax-1, where the first s entries carry weight A and the marked
// last entry carries weight B.  Returns g[s] = that expectation for tuple
// length s+1.  Used by BlockRepeat over injective bases: A = q^m, B = q^rho.
std::vector<double> marked_subset_means(std::span<const double> a,
                                        std::span<const double> b, int smax) {
  const int n = static_cast<int>(a.size());
  std::vector<double> f(static_cast<std::size_t>(smax) + 1, 0.0);  // plain
  std::vector<double> g(static_cast<std::size_t>(smax) + 1, 0.0);  // marked
  f[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double ai = a[static_cast<std::size_t>(i - 1)];
    const double bi = b[static_cast<std::size_t>(i - 1)];
    const int jmax = std::min(i - 1, smax);
    for (int s = jmax; s >= 0; --s) {
      const double keep =
          s < i - 1 ? g[static_cast<std::size_t>(s)] *
                          static_cast<double>(i - 1 - s) /
                          static_cast<double>(i)
                    : 0.0;
      const double mark =
          f[static_cast<std::size_t>(s)] * bi / static_cast<double>(i);
      const double grow =
          s > 0 ? ai * static_cast<double>(s) / static_cast<double>(i) *
                      g[static_cast<std::size_t>(s - 1)]
                : 0.0;
      g[static_cast<std::size_t>(s)] = keep + mark + grow;
    }
    const int fmax = std::min(i, smax);
    for (int s = fmax; s >= 1; --s) {
      f[static_cast<std::size_t>(s)] =
          f[static_cast<std::size_t>(s)] * static_cast<double>(i - s) /
              static_cast<double>(i) +
          ai * f[static_cast<std::size_t>(s - 1)] * static_cast<double>(s) /
              static_cast<double>(i);
    }
  }
  return g;
}

double power_sum_mean(std::span<const double> x, int w) {
  double s = 0.0;
  for (double v : x) s += std::pow(v, w);
  return s / static_cast<double>(x.size());
}

std::vector<double> fixed_scheme_survival(const Scheme& scheme,
                                          std::span<const double> miss) {
  std::vector<double> out(scheme.assignment.size() + 1, 0.0);
  out[0] = 1.0;
  double prod = 1.0;
  for (std::size_t t = 0; t < scheme.assignment.size(); ++t) {
    prod *= miss[static_cast<std::size_t>(scheme.assignment[t])];
    out[t + 1] = prod;
  }
  return out;
}

}  // namespace

std::optional<std::vector<double>> scheme_averaged_survival(
    const SchemeFamily& family, std::span<const double> miss) {
  const int n = family.detectors();
  const int r = family.rounds();
  if (static_cast<int>(miss.size()) != n)
    throw std::invalid_argument(
        "scheme_averaged_survival: configuration size mismatch");

  switch (family.kind()) {
    case SchemeKind::UniformInjective:
      // E over injective prefixes equals the mean product over j-subsets.
      return subset_product_means(miss, r);

    case SchemeKind::IidUniform: {
      const double mq = power_sum_mean(miss, 1);
      std::vector<double> out(static_cast<std::size_t>(r) + 1);
      out[0] = 1.0;
      for (int j = 1; j <= r; ++j)
        out[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j - 1)] * mq;
      return out;
    }

    case SchemeKind::RoundRobin: {
      std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
      out[0] = 1.0;
      if (family.round_robin_offset()) {
        const int o = *family.round_robin_offset();
        double prod = 1.0;
        for (int j = 1; j <= r; ++j) {
          prod *= miss[static_cast<std::size_t>((o + j - 1) % n)];
          out[static_cast<std::size_t>(j)] = prod;
        }
        return out;
      }
      std::vector<double> window(static_cast<std::size_t>(n), 1.0);
      for (int j = 1; j <= r; ++j) {
        double sum = 0.0;
        for (int o = 0; o < n; ++o) {
          window[static_cast<std::size_t>(o)] *=
              miss[static_cast<std::size_t>((o + j - 1) % n)];
          sum += window[static_cast<std::size_t>(o)];
        }
        out[static_cast<std::size_t>(j)] = sum / static_cast<double>(n);
      }
      return out;
    }

    case SchemeKind::BlockRepeat: {
      const int m = family.block();
      const SchemeFamily& base = family.base();
      std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
      out[0] = 1.0;
      if (base.kind() == SchemeKind::IidUniform) {
        std::vector<double> s_pow(static_cast<std::size_t>(m) + 1, 1.0);
        for (int w = 1; w <= m; ++w) s_pow[static_cast<std::size_t>(w)] =
            power_sum_mean(miss, w);
        for (int j = 1; j <= r; ++j) {
          const int u = (j + m - 1) / m;
          const int rho = j - m * (u - 1);
          out[static_cast<std::size_t>(j)] =
              std::pow(s_pow[static_cast<std::size_t>(m)], u - 1) *
              s_pow[static_cast<std::size_t>(rho)];
        }
        return out;
      }
      if (base.kind() == SchemeKind::UniformInjective) {
        const int umax = base.rounds();
        std::vector<double> a(miss.size());
        for (std::size_t i = 0; i < miss.size(); ++i)
          a[i] = std::pow(miss[i], m);
        for (int rho = 1; rho <= m; ++rho) {
          std::vector<double> b(miss.size());
          for (std::size_t i = 0; i < miss.size(); ++i)
            b[i] = std::pow(miss[i], rho);
          const auto g = marked_subset_means(a, b, umax - 1);
          // j values with this remainder: j = m (u - 1) + rho, u = 1..umax.
          for (int u = 1; u <= umax; ++u) {
            const int j = m * (u - 1) + rho;
            if (j >= 1 && j <= r)
              out[static_cast<std::size_t>(j)] =
                  g[static_cast<std::size_t>(u - 1)];
          }
        }
        return out;
      }
      if (base.kind() == SchemeKind::Fixed ||
          base.kind() == SchemeKind::CustomWeighted) {
        for (std::size_t s = 0; s < base.schemes().size(); ++s) {
          Scheme stretched;
          stretched.assignment.resize(static_cast<std::size_t>(r));
          for (int t = 0; t < r; ++t)
            stretched.assignment[static_cast<std::size_t>(t)] =
                base.schemes()[s].assignment[static_cast<std::size_t>(t / m)];
          const auto sv = fixed_scheme_survival(stretched, miss);
          for (int j = 1; j <= r; ++j)
            out[static_cast<std::size_t>(j)] +=
                base.weights()[s] * sv[static_cast<std::size_t>(j)];
        }
        return out;
      }
      return std::nullopt;
    }

    case SchemeKind::HotStart: {
      const int pin = family.pinned();
      std::vector<double> rest;
      rest.reserve(miss.size() - 1);
      for (int i = 0; i < n; ++i)
        if (i != pin) rest.push_back(miss[static_cast<std::size_t>(i)]);
      const auto base = scheme_averaged_survival(family.base(), rest);
      if (!base) return std::nullopt;
      std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
      out[0] = 1.0;
      const double qpin = miss[static_cast<std::size_t>(pin)];
      for (int j = 1; j <= r; ++j)
        out[static_cast<std::size_t>(j)] =
            qpin * (*base)[static_cast<std::size_t>(j - 1)];
      return out;
    }

    case SchemeKind::Fixed: {
      return fixed_scheme_survival(family.schemes().front(), miss);
    }

    case SchemeKind::CustomWeighted: {
      std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
      for (std::size_t s = 0; s < family.schemes().size(); ++s) {
        const auto sv = fixed_scheme_survival(family.schemes()[s], miss);
        for (int j = 0; j <= r; ++j)
          out[static_cast<std::size_t>(j)] +=
              family.weights()[s] * sv[static_cast<std::size_t>(j)];
      }
      return out;
    }
  }
  return std::nullopt;
}

std::vector<double> scheme_averaged_survival_by_prefix_law(
    const SchemeFamily& family, std::span<const double> miss,
    std::int64_t tuple_budget) {
  const int r = family.rounds();
  std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
  out[0] = 1.0;
  for (int j = 1; j <= r; ++j) {
    const PrefixLaw law = prefix_law(family, j, tuple_budget);
    double sum = 0.0;
    for (std::size_t i = 0; i < law.tuples.size(); ++i) {
      double prod = law.probs[i];
      for (int d : law.tuples[i]) prod *= miss[static_cast<std::size_t>(d)];
      sum += prod;
    }
    out[static_cast<std::size_t>(j)] = sum;
  }
  return out;
}

namespace {

QuenchedStats stats_from_survival(const std::vector<double>& survival) {
  QuenchedStats s;
  const int r = static_cast<int>(survival.size()) - 1;
  double sum = 0.0;
  for (int j = 0; j < r; ++j) sum += survival[static_cast<std::size_t>(j)];
  s.t_of_p = sum - static_cast<double>(r) * survival[static_cast<std::size_t>(r)];
  s.s_of_p = 1.0 - survival[static_cast<std::size_t>(r)];
  return s;
}

}  // namespace

QuenchedStats quenched_stats(const SchemeFamily& family,
                             const Configuration& config, EstimateMethod method,
                             std::int64_t scheme_samples, std::uint64_t seed) {
  if (config.size() != family.detectors())
    throw std::invalid_argument("quenched_stats: dimension mismatch");
  const std::vector<double> q = config.miss();

  if (method == EstimateMethod::Exact) {
    if (const auto sv = scheme_averaged_survival(family, q))
      return stats_from_survival(*sv);
    return stats_from_survival(scheme_averaged_survival_by_prefix_law(family, q));
  }

  double sum_t = 0.0, sum_t2 = 0.0, sum_s = 0.0, sum_s2 = 0.0;
  for (std::int64_t i = 0; i < scheme_samples; ++i) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Scheme,
                                      static_cast<std::uint64_t>(i));
    const Scheme pi = family.sample(rng);
    const double t = expected_detection_time(pi, config);
    const double s = detection_law(pi, config).success_probability();
    sum_t += t;
    sum_t2 += t * t;
    sum_s += s;
    sum_s2 += s * s;
  }
  const double nn = static_cast<double>(scheme_samples);
  QuenchedStats out;
  out.exact = false;
  out.scheme_samples = scheme_samples;
  out.t_of_p = sum_t / nn;
  out.s_of_p = sum_s / nn;
  if (scheme_samples > 1) {
    const double var_t =
        std::max(0.0, (sum_t2 - nn * out.t_of_p * out.t_of_p) / (nn - 1.0));
    const double var_s =
        std::max(0.0, (sum_s2 - nn * out.s_of_p * out.s_of_p) / (nn - 1.0));
    out.se_t = std::sqrt(var_t / nn);
    out.se_s = std::sqrt(var_s / nn);
  }
  return out;
}

std::vector<SurvivalTerm> survival_terms(const SchemeFamily& family,
                                         const Configuration& config,
                                         int max_order, EstimateMethod method,
                                         std::int64_t scheme_samples,
                                         std::uint64_t seed) {
  if (max_order < 1 || max_order > family.rounds())
    throw std::invalid_argument("survival_terms: order out of range");
  const std::vector<double> q = config.miss();
  std::vector<SurvivalTerm> terms(static_cast<std::size_t>(max_order));

  if (method == EstimateMethod::Exact) {
    std::vector<double> sv;
    if (const auto closed = scheme_averaged_survival(family, q))
      sv = *closed;
    else
      sv = scheme_averaged_survival_by_prefix_law(family, q);
    for (int j = 1; j <= max_order; ++j)
      terms[static_cast<std::size_t>(j - 1)] = {j, sv[static_cast<std::size_t>(j)]};
    return terms;
  }

  std::vector<double> acc(static_cast<std::size_t>(max_order), 0.0);
  for (std::int64_t i = 0; i < scheme_samples; ++i) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Scheme,
                                      static_cast<std::uint64_t>(i));
    const Scheme pi = family.sample(rng);
    double prod = 1.0;
    for (int j = 1; j <= max_order; ++j) {
      prod *= q[static_cast<std::size_t>(pi.assignment[static_cast<std::size_t>(j - 1)])];
      acc[static_cast<std::size_t>(j - 1)] += prod;
    }
  }
  for (int j = 1; j <= max_order; ++j)
    terms[static_cast<std::size_t>(j - 1)] = {
        j, acc[static_cast<std::size_t>(j - 1)] /
               static_cast<double>(scheme_samples)};
  return terms;
}

QuenchedEvaluator::QuenchedEvaluator(SchemeFamily family)
    : family_(std::move(family)) {
  // Probe the closed-form route once with a degenerate configuration.
  std::vector<double> probe(static_cast<std::size_t>(family_.detectors()), 0.5);
  has_exact_ = scheme_averaged_survival(family_, probe).has_value();
  cacheable_ = family_.exchangeable();
  hot_start_cacheable_ = family_.kind() == SchemeKind::HotStart &&
                         family_.base().exchangeable();
}

std::shared_ptr<const QuenchedEvaluator::Values> QuenchedEvaluator::compute(
    std::span<const double> miss) const {
  const auto sv = scheme_averaged_survival(family_, miss);
  if (!sv)
    throw std::runtime_error("QuenchedEvaluator: no exact route for family");
  auto v = std::make_shared<Values>();
  v->survival = *sv;
  const QuenchedStats s = stats_from_survival(v->survival);
  v->t_of_p = s.t_of_p;
  v->s_of_p = s.s_of_p;
  return v;
}

std::shared_ptr<const QuenchedEvaluator::Values> QuenchedEvaluator::exact(
    const Configuration& config) const {
  if (config.size() != family_.detectors())
    throw std::invalid_argument("QuenchedEvaluator: dimension mismatch");

  if (!cacheable_ && !hot_start_cacheable_) {
    return compute(config.miss());
  }

  // Canonical key: sorted miss values (exchangeable families), optionally
  // prefixed by the pinned detector's miss value (HotStart).
  std::vector<double> q = config.miss();
  Key key;
  std::vector<double> canonical;
  if (hot_start_cacheable_) {
    const int pin = family_.pinned();
    const double qpin = q[static_cast<std::size_t>(pin)];
    std::vector<double> rest;
    rest.reserve(q.size() - 1);
    for (int i = 0; i < static_cast<int>(q.size()); ++i)
      if (i != pin) rest.push_back(q[static_cast<std::size_t>(i)]);
    std::sort(rest.begin(), rest.end());
    key.push_back(qpin);
    key.insert(key.end(), rest.begin(), rest.end());
    // Rebuild a configuration-ordered vector with the pin in place.
    canonical = rest;
    canonical.insert(canonical.begin() + pin, qpin);
  } else {
    std::sort(q.begin(), q.end());
    key = q;
    canonical = q;
  }

  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto v = compute(canonical);
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache_.emplace(std::move(key), std::move(v));
  return it->second;
}

}  // namespace detcap
