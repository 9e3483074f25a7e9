#include "detcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "detcap/capacity.hpp"
#include "detcap/detection.hpp"
#include "detcap/ensemble.hpp"
#include "detcap/experiment.hpp"
#include "detcap/bounds.hpp"
#include "detcap/oracle.hpp"
#include "detcap/profile.hpp"
#include "detcap/quenched.hpp"

namespace detcap {

namespace {

constexpr double kTight = 1e-12;

struct Suite {
  std::vector<CheckResult> results;
  std::uint64_t seed;

  void check(const std::string& name, const std::function<std::string()>& fn) {
    CheckResult res;
    res.name = name;
    try {
      res.detail = fn();  // empty detail = pass
      res.pass = res.detail.empty();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(res));
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ConfigAlphabet two_letter() { return ConfigAlphabet({0.2, 0.8}); }

Configuration random_config(const ConfigAlphabet& alphabet, int n,
                            RngStream& rng) {
  return alphabet.sample_configuration(n, rng);
}

Scheme random_scheme(int n, int r, RngStream& rng) {
  Scheme s;
  s.assignment.resize(static_cast<std::size_t>(r));
  for (int t = 0; t < r; ++t)
    s.assignment[static_cast<std::size_t>(t)] = rng.uniform_index(n);
  return s;
}

std::string check_alphabet_moments() {
  const std::vector<ConfigAlphabet> alphabets = {
      two_letter(), ConfigAlphabet({0.1, 0.3, 0.5}),
      ConfigAlphabet({0.25, 0.5, 0.75}, {0.2, 0.3, 0.5})};
  for (const auto& a : alphabets) {
    double root_prev = 0.0;
    double m_prev = 1.0;
    for (int w = 1; w <= 12; ++w) {
      const double m = a.miss_moment(w);
      if (!(m > 0.0 && m < 1.0)) return "moment outside (0,1)";
      if (!(m < m_prev)) return "moments not decreasing";
      m_prev = m;
      const double jensen = std::pow(1.0 - a.p_average(), w);
      if (m < jensen - kTight) return "jensen gap violated at w=" + fmt(w);
      const double root = std::pow(m, 1.0 / w);
      if (root + kTight < root_prev)
        return "power-mean chain violated at w=" + fmt(w);
      root_prev = root;
    }
  }
  const ConfigAlphabet point({0.5});
  for (int w = 1; w <= 6; ++w) {
    if (std::abs(point.miss_moment(w) - std::pow(0.5, w)) > kTight)
      return "single-point moment mismatch";
  }
  return {};
}

std::string check_sampling_determinism(std::uint64_t seed) {
  const ConfigAlphabet a = two_letter();
  RngStream r1 = RngStream::derive(seed, StreamDomain::Config, 0);
  RngStream r2 = RngStream::derive(seed, StreamDomain::Config, 0);
  const Configuration c1 = a.sample_configuration(10, r1);
  const Configuration c2 = a.sample_configuration(10, r2);
  if (c1.probs != c2.probs) return "identical streams disagree";
  RngStream r3 = RngStream::derive(seed, StreamDomain::Config, 1);
  const Configuration c3 = a.sample_configuration(10, r3);
  if (c1.probs == c3.probs) return "distinct streams coincide (suspicious)";
  return {};
}

std::string check_scheme_summaries(std::uint64_t seed) {
  const int n = 20;
  const std::vector<FamilySpec> catalog = default_catalog();
  for (const auto& spec : catalog) {
    const int r = std::min(8, spec.max_rounds(n));
    const SchemeFamily fam = spec.make(n, r);
    double prev_a = 1.0, prev_b = 1.0;
    for (int k = 1; k <= r; ++k) {
      const auto a = fam.prefix_distinctness_exact(k);
      const auto b = fam.pairwise_disjointness_exact(k);
      if (!a || !b) return spec.label() + ": missing closed form";
      if (*a > prev_a + kTight) return spec.label() + ": a_k increased";
      if (*b > prev_b + kTight) return spec.label() + ": b_k increased";
      prev_a = *a;
      prev_b = *b;
      if (k <= 3) {
        const auto a_mc = prefix_distinctness(fam, k, EstimateMethod::MonteCarlo,
                                              20000, mix64(seed ^ k));
        const auto b_mc = pairwise_disjointness(
            fam, k, EstimateMethod::MonteCarlo, 20000, mix64(seed ^ (k + 100)));
        if (std::abs(a_mc.a_k - *a) > 4.0 * a_mc.std_error + 1e-9)
          return spec.label() + ": a_" + std::to_string(k) +
                 " MC disagrees with closed form";
        if (std::abs(b_mc.b_k - *b) > 4.0 * b_mc.std_error + 1e-9)
          return spec.label() + ": b_" + std::to_string(k) +
                 " MC disagrees with closed form";
      }
    }
  }
  return {};
}

std::string check_theorem_labels() {
  // Distinctness and disjointness limits along a growing grid identify the
  // capacity-achieving families.
  const std::vector<int> grid = {100, 1000, 10000};
  for (int n : grid) {
    const auto inj = SchemeFamily::uniform_injective(n, 10);
    const auto iid = SchemeFamily::iid_uniform(n, 10);
    for (int k = 1; k <= 3; ++k) {
      if (*inj.prefix_distinctness_exact(k) != 1.0) return "injective a_k != 1";
      if (*inj.pairwise_disjointness_exact(k) < 1.0 - 3.0 * k / n)
        return "injective b_k too small";
      if (*iid.prefix_distinctness_exact(k) < 1.0 - 1.0 * k * k / n)
        return "iid a_k too small";
      if (*iid.pairwise_disjointness_exact(k) < 1.0 - 2.0 * k * k / n)
        return "iid b_k too small";
    }
    const auto block = SchemeFamily::block_repeat(
        2, SchemeFamily::uniform_injective(n, 5));
    if (*block.prefix_distinctness_exact(2) != 0.0) return "block a_2 != 0";
    const auto hot = SchemeFamily::hot_start(
        0, SchemeFamily::uniform_injective(n - 1, 9));
    if (*hot.prefix_distinctness_exact(3) != 1.0) return "hot a_3 != 1";
    if (*hot.pairwise_disjointness_exact(1) != 0.0) return "hot b_1 != 0";
  }
  return {};
}

std::string check_detection_consistency(std::uint64_t seed) {
  const ConfigAlphabet alphabet = two_letter();
  for (int inst = 0; inst < 1000; ++inst) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Generic,
                                      static_cast<std::uint64_t>(inst));
    const int n = 2 + rng.uniform_index(5);
    const int r = 1 + rng.uniform_index(8);
    const Configuration cfg = random_config(alphabet, n, rng);
    const Scheme pi = random_scheme(n, r, rng);

    const SurvivalSequence sv = survival_sequence(pi, cfg);
    const DetectionLaw law = detection_law(pi, cfg);
    double total = law.miss_mass;
    double mean_pmf = 0.0;
    for (int k = 1; k <= r; ++k) {
      const double expect = sv.values[static_cast<std::size_t>(k - 1)] -
                            sv.values[static_cast<std::size_t>(k)];
      if (std::abs(law.pmf[static_cast<std::size_t>(k - 1)] - expect) > kTight)
        return "pmf/survival mismatch";
      total += law.pmf[static_cast<std::size_t>(k - 1)];
      mean_pmf += k * law.pmf[static_cast<std::size_t>(k - 1)];
    }
    if (std::abs(total - 1.0) > kTight) return "law does not sum to 1";
    if (std::abs(mean_pmf - expected_detection_time(pi, cfg)) > kTight)
      return "truncated-mean identity violated";
  }
  return {};
}

std::string check_oracle_equivalence(bool fast) {
  const ConfigAlphabet alphabet = two_letter();
  const int r_max = fast ? 4 : 6;
  for (int n = 2; n <= 4; ++n) {
    const int r = r_max;
    // All schemes via odometer, all 2-letter configurations.
    std::vector<int> scheme_digits(static_cast<std::size_t>(r), 0);
    bool scheme_done = false;
    while (!scheme_done) {
      Scheme pi;
      pi.assignment = scheme_digits;
      for (int mask = 0; mask < (1 << n); ++mask) {
        Configuration cfg;
        cfg.probs.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          cfg.probs[static_cast<std::size_t>(i)] =
              (mask >> i) & 1 ? 0.8 : 0.2;
        const DetectionLaw exact = detection_law(pi, cfg);
        const DetectionLaw brute = oracle_pmf(pi, cfg);
        if (std::abs(exact.miss_mass - brute.miss_mass) > kTight)
          return "oracle mass mismatch";
        for (int k = 0; k < r; ++k)
          if (std::abs(exact.pmf[static_cast<std::size_t>(k)] -
                       brute.pmf[static_cast<std::size_t>(k)]) > kTight)
            return "oracle pmf mismatch";
      }
      scheme_done = true;
      for (int t = 0; t < r; ++t) {
        if (++scheme_digits[static_cast<std::size_t>(t)] < n) {
          scheme_done = false;
          break;
        }
        scheme_digits[static_cast<std::size_t>(t)] = 0;
      }
    }
  }
  return {};
}

std::string check_detection_monotonicity(std::uint64_t seed) {
  const ConfigAlphabet alphabet = two_letter();
  for (int inst = 0; inst < 200; ++inst) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Generic,
                                      900000 + static_cast<std::uint64_t>(inst));
    const int n = 2 + rng.uniform_index(4);
    const int r = 1 + rng.uniform_index(6);
    Configuration cfg = random_config(alphabet, n, rng);
    const Scheme pi = random_scheme(n, r, rng);
    const double before = detection_law(pi, cfg).success_probability();
    const int slot = rng.uniform_index(r);
    const int det = pi.assignment[static_cast<std::size_t>(slot)];
    cfg.probs[static_cast<std::size_t>(det)] =
        std::min(0.95, cfg.probs[static_cast<std::size_t>(det)] + 0.1);
    const double after = detection_law(pi, cfg).success_probability();
    if (after + kTight < before) return "success probability decreased";
  }
  return {};
}

std::string check_prefix_law_masses() {
  const int n = 5;
  for (const auto& spec : default_catalog()) {
    const int r = std::min(3, spec.max_rounds(n));
    const SchemeFamily fam = spec.make(n, r);
    for (int j = 1; j <= r; ++j) {
      const PrefixLaw law = prefix_law(fam, j);
      double total = 0.0;
      for (double p : law.probs) total += p;
      if (std::abs(total - 1.0) > kTight)
        return spec.label() + ": prefix law mass " + fmt(total);
    }
  }
  return {};
}

std::string check_quenched_routes(std::uint64_t seed) {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 6;
  for (const auto& spec : default_catalog()) {
    const int r = std::min(4, spec.max_rounds(n));
    const SchemeFamily fam = spec.make(n, r);
    for (int inst = 0; inst < 5; ++inst) {
      RngStream rng = RngStream::derive(
          seed, StreamDomain::Config, 5000 + static_cast<std::uint64_t>(inst));
      const Configuration cfg = random_config(alphabet, n, rng);
      const auto closed = scheme_averaged_survival(fam, cfg.miss());
      if (!closed) return spec.label() + ": no closed route";
      const auto by_law =
          scheme_averaged_survival_by_prefix_law(fam, cfg.miss());
      for (int j = 0; j <= r; ++j)
        if (std::abs((*closed)[static_cast<std::size_t>(j)] -
                     by_law[static_cast<std::size_t>(j)]) > kTight)
          return spec.label() + ": closed form disagrees with prefix law at j=" +
                 std::to_string(j);
      // Decomposition: T = sum_{j<r} T_j - r T_r reproduced by quenched stats.
      const QuenchedStats qs = quenched_stats(fam, cfg, EstimateMethod::Exact);
      double t = 0.0;
      for (int j = 0; j < r; ++j) t += (*closed)[static_cast<std::size_t>(j)];
      t -= r * (*closed)[static_cast<std::size_t>(r)];
      if (std::abs(t - qs.t_of_p) > kTight)
        return spec.label() + ": decomposition identity violated";
    }
  }
  return {};
}

std::string check_conf_average_sandwich() {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 12, r = 10;
  const double m1 = alphabet.miss_moment(1);
  const double qmax = 1.0 - alphabet.p_min();
  for (const auto& spec : default_catalog()) {
    const SchemeFamily fam = spec.make(n, std::min(r, spec.max_rounds(n)));
    const auto avg = configuration_averaged_survival(fam, alphabet);
    if (!avg) return spec.label() + ": no profile route";
    for (int j = 1; j < static_cast<int>(avg->size()); ++j) {
      const double v = (*avg)[static_cast<std::size_t>(j)];
      if (v < std::pow(m1, j) - kTight || v > std::pow(qmax, j) + kTight)
        return spec.label() + ": conf-average outside sandwich at j=" +
               std::to_string(j);
    }
    // Distinct-prefix families sit exactly on the lower edge.
    const auto a_r = fam.prefix_distinctness_exact(fam.rounds());
    if (a_r && *a_r == 1.0) {
      for (int j = 1; j < static_cast<int>(avg->size()); ++j)
        if (std::abs((*avg)[static_cast<std::size_t>(j)] - std::pow(m1, j)) >
            kTight)
          return spec.label() + ": distinct-prefix equality violated";
    }
  }
  return {};
}

std::string check_iid_egf_vs_partitions() {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 5, r = 8;
  const SchemeFamily fam = SchemeFamily::iid_uniform(n, r);
  const auto egf = configuration_averaged_survival(fam, alphabet);
  if (!egf) return "no EGF route";
  for (int j = 1; j <= r; ++j) {
    const auto law = prefix_profile_law(fam, j);
    if (!law) return "no partition law";
    double total_p = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < law->profiles.size(); ++i) {
      total_p += law->probs[i];
      sum += law->probs[i] * profile_moment_product(law->profiles[i], alphabet);
    }
    if (std::abs(total_p - 1.0) > 1e-10) return "partition law mass != 1";
    if (std::abs(sum - (*egf)[static_cast<std::size_t>(j)]) > 1e-10)
      return "EGF disagrees with partition enumeration at j=" + std::to_string(j);
  }
  return {};
}

std::string check_covariance_structure() {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 5;
  const BoundConstants bc = bound_constants(alphabet, 4, 3);
  if (bc.degenerate) return "unexpected degenerate constants";

  std::vector<std::vector<int>> tuples;
  for (int j = 1; j <= 3; ++j) {
    std::vector<int> cur(static_cast<std::size_t>(j), 0);
    bool done = false;
    while (!done) {
      tuples.push_back(cur);
      done = true;
      for (int t = 0; t < j; ++t) {
        if (++cur[static_cast<std::size_t>(t)] < n) {
          done = false;
          break;
        }
        cur[static_cast<std::size_t>(t)] = 0;
      }
    }
  }
  for (const auto& t1 : tuples) {
    for (const auto& t2 : tuples) {
      bool share = false;
      for (int a : t1)
        for (int b : t2)
          if (a == b) share = true;
      const double delta = product_covariance(t1, t2, alphabet);
      if (!share && std::abs(delta) > kTight)
        return "covariance nonzero for disjoint tuples";
      if (share) {
        if (delta <= 0.0) return "covariance not positive on overlap";
        const double floor =
            bc.floor(static_cast<int>(t1.size()), static_cast<int>(t2.size()));
        if (delta + kTight < floor) return "covariance below enumerated floor";
      }
      const double ej1 = alphabet.miss_moment(static_cast<int>(t1.size()));
      if (product_mean(t1, alphabet) > ej1 + kTight)
        return "product mean exceeds moment bound";
      std::vector<int> joined = t1;
      joined.insert(joined.end(), t2.begin(), t2.end());
      std::map<int, int> mult;
      for (int d : joined) ++mult[d];
      double joint = 1.0;
      for (const auto& [d, c] : mult) joint *= alphabet.miss_moment(c);
      if (joint >
          alphabet.miss_moment(static_cast<int>(joined.size())) + kTight)
        return "joint product mean exceeds moment bound";
    }
  }
  return {};
}

std::string check_oracle_conf_agreement() {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 4, r = 3;
  for (const auto& spec : default_catalog()) {
    const SchemeFamily fam = spec.make(n, std::min(r, spec.max_rounds(n)));
    const auto avg = configuration_averaged_survival(fam, alphabet);
    if (!avg) return spec.label() + ": no profile route";
    const double exact_mean = averaged_detection_from_survival(*avg).mean_t;
    const double oracle_mean =
        oracle_conf_moment(fam, alphabet, n, ConfStatistic::MeanT);
    if (std::abs(exact_mean - oracle_mean) > 1e-10)
      return spec.label() + ": profile mean " + fmt(exact_mean) +
             " != oracle " + fmt(oracle_mean);
  }
  return {};
}

std::string check_mean_window(std::uint64_t seed) {
  const ConfigAlphabet alphabet = two_letter();
  const double cap = 1.0 / alphabet.p_average();
  const double p_min = alphabet.p_min();
  const int n = 1000, r = 100;
  for (const auto& spec : default_catalog()) {
    const SchemeFamily fam = spec.make(n, std::min(r, spec.max_rounds(n)));
    double mean;
    if (const auto avg = configuration_averaged_survival(fam, alphabet)) {
      mean = averaged_detection_from_survival(*avg).mean_t;
    } else {
      mean = ensemble_report(fam, alphabet, 2000, seed).mean_t;
    }
    if (mean < cap - 0.01 || mean > cap + 1.0 / p_min + 0.01)
      return spec.label() + ": mean " + fmt(mean) + " outside window";
  }
  return {};
}

std::string check_covariance_positivity(std::uint64_t seed, std::int64_t reps) {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 100;
  for (const auto& spec : default_catalog()) {
    const int r = std::min(10, spec.max_rounds(n));
    const SchemeFamily fam = spec.make(n, r);
    const ReplicateTable table =
        sample_replicates(fam, alphabet, reps, mix64(seed), 3);
    for (int j1 = 1; j1 <= 3; ++j1) {
      for (int j2 = j1 + 1; j2 <= 3; ++j2) {
        const auto& x = table.terms[static_cast<std::size_t>(j1 - 1)];
        const auto& y = table.terms[static_cast<std::size_t>(j2 - 1)];
        const double mx = summarize(x).mean, my = summarize(y).mean;
        double cov = 0.0, var_prod = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          cov += (x[i] - mx) * (y[i] - my);
        cov /= static_cast<double>(x.size() - 1);
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double d = (x[i] - mx) * (y[i] - my) - cov;
          var_prod += d * d;
        }
        const double se =
            std::sqrt(var_prod / static_cast<double>(x.size() - 1) /
                      static_cast<double>(x.size()));
        if (cov < -4.0 * se - 1e-12)
          return spec.label() + ": cov(T_" + std::to_string(j1) + ",T_" +
                 std::to_string(j2) + ") = " + fmt(cov) + " < -4se";
      }
    }
  }
  return {};
}

std::string check_variance_sandwich_suite(std::uint64_t seed,
                                          std::int64_t reps) {
  const ConfigAlphabet alphabet = two_letter();
  const int n = 1000;
  for (const auto& spec : default_catalog()) {
    const int r = std::min(31, spec.max_rounds(n));
    const SchemeFamily fam = spec.make(n, r);
    const VarianceSandwich vs =
        variance_sandwich_check(fam, alphabet, 3, reps, mix64(seed ^ 0xabc));
    if (!vs.pass_lower)
      return spec.label() + ": var " + fmt(vs.var_emp) + " below floor " +
             fmt(vs.lower);
    if (!vs.pass_upper)
      return spec.label() + ": var " + fmt(vs.var_emp) + " above cap " +
             fmt(vs.upper);
    for (const auto& term : vs.terms)
      if (!term.pass)
        return spec.label() + ": per-term bound failed at j=" +
               std::to_string(term.j);
  }
  return {};
}

std::string check_capacity_consistency(std::uint64_t seed, std::int64_t reps,
                                       const std::vector<int>& grid) {
  const ConfigAlphabet alphabet = two_letter();
  RoundSchedule schedule;  // sqrt
  AchievabilityTarget target;
  target.s = 1.0 / alphabet.p_average();
  for (const auto& spec : default_catalog()) {
    const CapacityVerdict cv = capacity_sweep(
        spec, alphabet, grid, schedule, target, reps, mix64(seed ^ 0x77));
    if (!cv.matches_prediction)
      return spec.label() + ": verdict " + to_string(cv.verdict) +
             " != predicted " + to_string(cv.predicted);
    // Converse floor: mass at s strictly below capacity must not certify.
    for (const auto& probe : cv.converse)
      if (probe.mass > 1.0 - target.epsilon)
        return spec.label() + ": converse mass " + fmt(probe.mass) +
               " at fraction " + fmt(probe.s_fraction);
  }
  return {};
}

std::string check_s_convergence(std::uint64_t seed, std::int64_t reps,
                                const std::vector<int>& grid) {
  const ConfigAlphabet alphabet = two_letter();
  RoundSchedule schedule;
  for (const auto& spec : default_catalog()) {
    const SConvergence sc =
        s_convergence_check(spec, alphabet, grid, schedule, reps, seed);
    if (!sc.floor_ok_all) return spec.label() + ": AM-GM floor violated";
    double prev = 0.0;
    for (const auto& pt : sc.points) {
      if (pt.mean_s + 4.0 * pt.se + 1e-9 < prev)
        return spec.label() + ": mean_S decreased along grid";
      prev = pt.mean_s;
    }
    if (sc.top_mean_s < 0.99)
      return spec.label() + ": top mean_S " + fmt(sc.top_mean_s);
  }
  return {};
}

std::string check_mass_bound(std::uint64_t seed, std::int64_t reps, int n) {
  // P(S(p) > 1 - eps) >= 1 - 2 eps (minus sampling error) at the top size.
  const ConfigAlphabet alphabet = two_letter();
  const double eps = 0.05;
  const FamilySpec spec{.kind = SchemeKind::UniformInjective};
  RoundSchedule schedule;
  const int r = spec.rounds_for(schedule, n);
  const SchemeFamily fam = spec.make(n, r);
  const ReplicateTable table = sample_replicates(fam, alphabet, reps, seed);
  std::int64_t hits = 0;
  for (double s : table.s)
    if (s > 1.0 - eps) ++hits;
  const double mass = static_cast<double>(hits) / static_cast<double>(reps);
  const double se = std::sqrt(mass * (1.0 - mass) / static_cast<double>(reps));
  if (mass < 1.0 - 2.0 * eps - 4.0 * se)
    return "A(eps) mass " + fmt(mass) + " below 1 - 2 eps";
  return {};
}

std::string check_run_determinism(std::uint64_t seed) {
  namespace fs = std::filesystem;
  const char* cfg_text = R"({
    "alphabet": {"values": [0.2, 0.8]},
    "family": {"kind": "uniform_injective"},
    "schedule": {"rule": "sqrt"},
    "grid": {"n": [64, 256]},
    "target": {"epsilon": 0.05, "delta": 0.05},
    "replicates": 500,
    "seed": 99
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json_text(cfg_text);
  const fs::path base =
      fs::temp_directory_path() /
      ("detcap_verify_" + std::to_string(seed % 100000));
  const auto read = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const RunArtifacts a = run_experiment(cfg, (base / "a").string());
  const RunArtifacts b = run_experiment(cfg, (base / "b").string());
  const bool same_csv = read(a.sweep_csv_path) == read(b.sweep_csv_path);
  const bool same_json = read(a.verdict_json_path) == read(b.verdict_json_path);
  std::error_code ec;
  fs::remove_all(base, ec);
  if (!same_csv) return "sweep.csv differs between identical runs";
  if (!same_json) return "verdict.json differs between identical runs";
  return {};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(bool fast, std::uint64_t seed) {
  Suite suite;
  suite.seed = seed;

  suite.check("alphabet-moment-chain", [&] { return check_alphabet_moments(); });
  suite.check("sampling-determinism",
              [&] { return check_sampling_determinism(seed); });
  suite.check("scheme-summaries-exact-vs-mc",
              [&] { return check_scheme_summaries(seed); });
  suite.check("theorem-condition-labels", [&] { return check_theorem_labels(); });
  suite.check("detection-law-identities",
              [&] { return check_detection_consistency(seed); });
  suite.check("detection-vs-outcome-oracle",
              [&] { return check_oracle_equivalence(fast); });
  suite.check("detection-monotonicity",
              [&] { return check_detection_monotonicity(seed); });
  suite.check("prefix-law-masses", [&] { return check_prefix_law_masses(); });
  suite.check("quenched-closed-form-vs-prefix-law",
              [&] { return check_quenched_routes(seed); });
  suite.check("conf-average-sandwich",
              [&] { return check_conf_average_sandwich(); });
  suite.check("iid-generating-function-vs-partitions",
              [&] { return check_iid_egf_vs_partitions(); });
  suite.check("covariance-structure",
              [&] { return check_covariance_structure(); });
  suite.check("profile-route-vs-config-oracle",
              [&] { return check_oracle_conf_agreement(); });
  suite.check("mean-window", [&] { return check_mean_window(seed); });

  if (!fast) {
    suite.check("covariance-positivity", [&] {
      return check_covariance_positivity(seed, 100000);
    });
    suite.check("variance-sandwich", [&] {
      return check_variance_sandwich_suite(seed, 100000);
    });
    suite.check("capacity-verdicts-match-prediction", [&] {
      return check_capacity_consistency(seed, 2000, {100, 1000, 10000});
    });
    suite.check("success-probability-convergence", [&] {
      return check_s_convergence(seed, 2000, {100, 1000, 10000});
    });
    suite.check("high-success-mass-bound",
                [&] { return check_mass_bound(seed, 4000, 10000); });
    suite.check("run-determinism", [&] { return check_run_determinism(seed); });
  }
  return suite.results;
}

}  // namespace detcap
