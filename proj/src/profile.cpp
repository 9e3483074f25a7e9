#include "detcap/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detcap {

namespace {

void partitions_rec(int remaining, int max_part, Profile& cur,
                    std::vector<Profile>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, cur, out);
    cur.pop_back();
  }
}

// Truncated power-series product; all series indexed by coefficient degree.
std::vector<double> series_mul(const std::vector<double>& a,
                               const std::vector<double>& b, int deg) {
  std::vector<double> c(static_cast<std::size_t>(deg) + 1, 0.0);
  for (int i = 0; i <= deg; ++i) {
    const double ai = a[static_cast<std::size_t>(i)];
    if (ai == 0.0) continue;
    for (int j = 0; i + j <= deg; ++j)
      c[static_cast<std::size_t>(i + j)] += ai * b[static_cast<std::size_t>(j)];
  }
  return c;
}

std::vector<double> series_pow(std::vector<double> base, long long exponent,
                               int deg) {
  std::vector<double> result(static_cast<std::size_t>(deg) + 1, 0.0);
  result[0] = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result = series_mul(result, base, deg);
    exponent >>= 1;
    if (exponent > 0) base = series_mul(base, base, deg);
  }
  return result;
}

// Coefficients of sum_c m_{stride*c + shift} (z/n)^c / c!, degree <= deg.
// The recurrence keeps every coefficient well scaled (no factorial overflow).
std::vector<double> moment_egf(const ConfigAlphabet& alphabet, int stride,
                               int shift, int n, int deg) {
  std::vector<double> e(static_cast<std::size_t>(deg) + 1, 0.0);
  e[0] = alphabet.miss_moment_or_one(shift);
  for (int c = 1; c <= deg; ++c) {
    const double prev = alphabet.miss_moment_or_one(stride * (c - 1) + shift);
    const double cur = alphabet.miss_moment(stride * c + shift);
    const double ratio = prev > 0.0 ? cur / prev : 0.0;
    e[static_cast<std::size_t>(c)] = e[static_cast<std::size_t>(c - 1)] * ratio /
                                     (static_cast<double>(c) * n);
  }
  return e;
}

// E_conf E_sch alpha_j for iid-uniform picks over n detectors, j = 0..r:
// j! [z^j] E(z/n)^n with E the moment EGF.  All coefficients positive, so
// the evaluation is cancellation-free.
std::vector<double> iid_uniform_conf_survival(const ConfigAlphabet& alphabet,
                                              int n, int r) {
  const auto base = moment_egf(alphabet, 1, 0, n, r);
  const auto pw = series_pow(base, n, r);
  std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
  double fact = 1.0;
  for (int j = 0; j <= r; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    out[static_cast<std::size_t>(j)] = fact * pw[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

std::vector<Profile> partitions_of(int j) {
  if (j < 0) throw std::invalid_argument("partitions_of: negative j");
  std::vector<Profile> out;
  Profile cur;
  partitions_rec(j, j, cur, out);
  return out;
}

double profile_moment_product(const Profile& profile,
                              const ConfigAlphabet& alphabet) {
  double prod = 1.0;
  for (int part : profile) prod *= alphabet.miss_moment(part);
  return prod;
}

namespace {

Profile profile_of_tuple(const std::vector<int>& tuple, int upto) {
  std::vector<int> counts;
  std::vector<int> seen;
  for (int t = 0; t < upto; ++t) {
    const int d = tuple[static_cast<std::size_t>(t)];
    auto it = std::find(seen.begin(), seen.end(), d);
    if (it == seen.end()) {
      seen.push_back(d);
      counts.push_back(1);
    } else {
      ++counts[static_cast<std::size_t>(it - seen.begin())];
    }
  }
  std::sort(counts.begin(), counts.end(), std::greater<int>());
  return counts;
}

void merge_profile(ProfileLaw& law, Profile profile, double prob) {
  for (std::size_t i = 0; i < law.profiles.size(); ++i) {
    if (law.profiles[i] == profile) {
      law.probs[i] += prob;
      return;
    }
  }
  law.profiles.push_back(std::move(profile));
  law.probs.push_back(prob);
}

}  // namespace

std::optional<ProfileLaw> prefix_profile_law(const SchemeFamily& family,
                                             int j) {
  if (j < 1 || j > family.rounds())
    throw std::invalid_argument("prefix_profile_law: j out of range");
  const int n = family.detectors();
  ProfileLaw law;
  switch (family.kind()) {
    case SchemeKind::UniformInjective: {
      law.profiles.push_back(Profile(static_cast<std::size_t>(j), 1));
      law.probs.push_back(1.0);
      return law;
    }
    case SchemeKind::RoundRobin: {
      // Cyclic scan: deterministic multiplicities independent of offset.
      const int full = j / n, extra = j % n;
      Profile p;
      for (int i = 0; i < extra; ++i) p.push_back(full + 1);
      if (full > 0)
        for (int i = 0; i < n - extra; ++i) p.push_back(full);
      law.profiles.push_back(std::move(p));
      law.probs.push_back(1.0);
      return law;
    }
    case SchemeKind::IidUniform: {
      if (j > 25) return std::nullopt;  // partition count blows up
      double log_n_fall = 0.0;
      for (const Profile& prof : partitions_of(j)) {
        const int parts = static_cast<int>(prof.size());
        if (parts > n) continue;
        // ordered slot assignments * detector choices / n^j
        double log_p = std::lgamma(static_cast<double>(j) + 1.0);
        for (int part : prof) log_p -= std::lgamma(static_cast<double>(part) + 1.0);
        int run = 1;
        for (std::size_t i = 1; i <= prof.size(); ++i) {
          if (i < prof.size() && prof[i] == prof[i - 1]) {
            ++run;
          } else {
            log_p -= std::lgamma(static_cast<double>(run) + 1.0);
            run = 1;
          }
        }
        log_n_fall = 0.0;
        for (int i = 0; i < parts; ++i)
          log_n_fall += std::log(static_cast<double>(n - i));
        log_p += log_n_fall - static_cast<double>(j) * std::log(static_cast<double>(n));
        law.profiles.push_back(prof);
        law.probs.push_back(std::exp(log_p));
      }
      return law;
    }
    case SchemeKind::BlockRepeat: {
      const int m = family.block();
      const int u = (j + m - 1) / m;
      const int rho = j - m * (u - 1);
      const auto base_distinct = family.base().prefix_distinctness_exact(u);
      if (base_distinct && *base_distinct == 1.0) {
        Profile p(static_cast<std::size_t>(u - 1), m);
        p.push_back(rho);
        std::sort(p.begin(), p.end(), std::greater<int>());
        law.profiles.push_back(std::move(p));
        law.probs.push_back(1.0);
        return law;
      }
      if (family.base().kind() == SchemeKind::Fixed ||
          family.base().kind() == SchemeKind::CustomWeighted) {
        for (std::size_t s = 0; s < family.base().schemes().size(); ++s) {
          std::vector<int> stretched(static_cast<std::size_t>(j));
          for (int t = 0; t < j; ++t)
            stretched[static_cast<std::size_t>(t)] =
                family.base().schemes()[s].assignment[static_cast<std::size_t>(t / m)];
          merge_profile(law, profile_of_tuple(stretched, j),
                        family.base().weights()[s]);
        }
        return law;
      }
      return std::nullopt;
    }
    case SchemeKind::HotStart: {
      if (j == 1) {
        law.profiles.push_back({1});
        law.probs.push_back(1.0);
        return law;
      }
      // Base picks live on the reduced set, so the pin adds a unit part.
      const auto base = prefix_profile_law(family.base(), j - 1);
      if (!base) return std::nullopt;
      for (std::size_t i = 0; i < base->profiles.size(); ++i) {
        Profile p = base->profiles[i];
        p.push_back(1);
        std::sort(p.begin(), p.end(), std::greater<int>());
        merge_profile(law, std::move(p), base->probs[i]);
      }
      return law;
    }
    case SchemeKind::Fixed:
    case SchemeKind::CustomWeighted: {
      for (std::size_t s = 0; s < family.schemes().size(); ++s)
        merge_profile(law,
                      profile_of_tuple(family.schemes()[s].assignment, j),
                      family.weights()[s]);
      return law;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<double>> configuration_averaged_survival(
    const SchemeFamily& family, const ConfigAlphabet& alphabet) {
  const int n = family.detectors();
  const int r = family.rounds();

  if (family.kind() == SchemeKind::IidUniform)
    return iid_uniform_conf_survival(alphabet, n, r);

  if (family.kind() == SchemeKind::HotStart) {
    const auto base = configuration_averaged_survival(family.base(), alphabet);
    if (!base) return std::nullopt;
    std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
    out[0] = 1.0;
    const double m1 = alphabet.miss_moment(1);
    for (int j = 1; j <= r; ++j)
      out[static_cast<std::size_t>(j)] =
          m1 * (*base)[static_cast<std::size_t>(j - 1)];
    return out;
  }

  if (family.kind() == SchemeKind::BlockRepeat &&
      family.base().kind() == SchemeKind::IidUniform) {
    // Marked generating function: the final (possibly partial) block carries
    // exponent rho, every earlier block carries the full exponent m.
    const int m = family.block();
    const int umax = family.base().rounds();
    std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
    out[0] = 1.0;
    const auto full = moment_egf(alphabet, m, 0, n, umax - 1);
    const auto full_pow = series_pow(full, n - 1, umax - 1);
    for (int rho = 1; rho <= m; ++rho) {
      const auto marked = moment_egf(alphabet, m, rho, n, umax - 1);
      const auto prod = series_mul(marked, full_pow, umax - 1);
      double fact = 1.0;
      for (int u = 1; u <= umax; ++u) {
        if (u > 1) fact *= static_cast<double>(u - 1);
        const int j = m * (u - 1) + rho;
        if (j >= 1 && j <= r)
          out[static_cast<std::size_t>(j)] =
              fact * prod[static_cast<std::size_t>(u - 1)];
      }
    }
    return out;
  }

  std::vector<double> out(static_cast<std::size_t>(r) + 1, 0.0);
  out[0] = 1.0;
  for (int j = 1; j <= r; ++j) {
    const auto law = prefix_profile_law(family, j);
    if (!law) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < law->profiles.size(); ++i)
      sum += law->probs[i] * profile_moment_product(law->profiles[i], alphabet);
    out[static_cast<std::size_t>(j)] = sum;
  }
  return out;
}

AveragedDetection averaged_detection_from_survival(
    const std::vector<double>& survival) {
  AveragedDetection avg;
  const int r = static_cast<int>(survival.size()) - 1;
  double sum = 0.0;
  for (int j = 0; j < r; ++j) sum += survival[static_cast<std::size_t>(j)];
  avg.mean_t =
      sum - static_cast<double>(r) * survival[static_cast<std::size_t>(r)];
  avg.mean_s = 1.0 - survival[static_cast<std::size_t>(r)];
  return avg;
}

}  // namespace detcap
