#include "detcap/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detcap/parallel.hpp"
#include "detcap/profile.hpp"

namespace detcap {

ReplicateTable sample_replicates(const SchemeFamily& family,
                                 const ConfigAlphabet& alphabet,
                                 std::int64_t replicates, std::uint64_t seed,
                                 int max_term_order,
                                 std::int64_t scheme_samples_fallback) {
  if (replicates < 1)
    throw std::invalid_argument("sample_replicates: replicates must be >= 1");
  if (max_term_order > family.rounds())
    throw std::invalid_argument("sample_replicates: term order exceeds r");

  const int n = family.detectors();
  ReplicateTable table;
  table.t.resize(static_cast<std::size_t>(replicates));
  table.s.resize(static_cast<std::size_t>(replicates));
  table.terms.assign(static_cast<std::size_t>(max_term_order),
                     std::vector<double>(static_cast<std::size_t>(replicates)));

  const QuenchedEvaluator evaluator(family);
  table.exact = evaluator.has_exact();

  parallel_for(replicates, [&](std::int64_t i) {
    RngStream conf_rng = RngStream::derive(seed, StreamDomain::Config,
                                           static_cast<std::uint64_t>(i));
    const Configuration cfg = alphabet.sample_configuration(n, conf_rng);
    if (evaluator.has_exact()) {
      const auto v = evaluator.exact(cfg);
      table.t[static_cast<std::size_t>(i)] = v->t_of_p;
      table.s[static_cast<std::size_t>(i)] = v->s_of_p;
      for (int j = 1; j <= max_term_order; ++j)
        table.terms[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] =
            v->survival[static_cast<std::size_t>(j)];
    } else {
      const std::uint64_t sub_seed = mix64(seed ^ static_cast<std::uint64_t>(i));
      const QuenchedStats qs =
          quenched_stats(family, cfg, EstimateMethod::MonteCarlo,
                         scheme_samples_fallback, sub_seed);
      table.t[static_cast<std::size_t>(i)] = qs.t_of_p;
      table.s[static_cast<std::size_t>(i)] = qs.s_of_p;
      if (max_term_order > 0) {
        const auto terms =
            survival_terms(family, cfg, max_term_order,
                           EstimateMethod::MonteCarlo, scheme_samples_fallback,
                           mix64(sub_seed));
        for (int j = 1; j <= max_term_order; ++j)
          table.terms[static_cast<std::size_t>(j - 1)]
                     [static_cast<std::size_t>(i)] =
              terms[static_cast<std::size_t>(j - 1)].value;
      }
    }
  });
  return table;
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats st;
  const double nn = static_cast<double>(values.size());
  if (values.empty()) return st;
  st.mean = pairwise_sum(values) / nn;
  if (values.size() < 2) return st;

  std::vector<double> dev2(values.size()), dev4(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - st.mean;
    dev2[i] = d * d;
    dev4[i] = d * d * d * d;
  }
  const double sum2 = pairwise_sum(dev2);
  st.variance = sum2 / (nn - 1.0);
  st.se_mean = std::sqrt(st.variance / nn);
  // Standard error of the sample variance via the fourth central moment.
  const double m4 = pairwise_sum(dev4) / nn;
  const double inner =
      (m4 - st.variance * st.variance * (nn - 3.0) / (nn - 1.0)) / nn;
  st.se_variance = std::sqrt(std::max(0.0, inner));
  return st;
}

EnsembleReport ensemble_report(const SchemeFamily& family,
                               const ConfigAlphabet& alphabet,
                               std::int64_t replicates, std::uint64_t seed) {
  if (replicates < 2)
    throw std::invalid_argument("ensemble_report: replicates must be >= 2");
  const ReplicateTable table =
      sample_replicates(family, alphabet, replicates, seed);

  EnsembleReport rep;
  rep.n = family.detectors();
  rep.r = family.rounds();
  rep.replicates = replicates;
  rep.quenched_exact = table.exact;

  const SummaryStats st_t = summarize(table.t);
  const SummaryStats st_s = summarize(table.s);
  rep.mean_t = st_t.mean;
  rep.se_mean_t = st_t.se_mean;
  rep.var_t = st_t.variance;
  rep.se_var_t = st_t.se_variance;
  rep.mean_s = st_s.mean;
  rep.se_mean_s = st_s.se_mean;

  if (const auto avg = configuration_averaged_survival(family, alphabet)) {
    const AveragedDetection exact = averaged_detection_from_survival(*avg);
    rep.exact_mean_t = exact.mean_t;
    rep.exact_mean_s = exact.mean_s;
  }
  return rep;
}

VarianceSandwich variance_sandwich_check(const SchemeFamily& family,
                                         const ConfigAlphabet& alphabet, int k,
                                         std::int64_t replicates,
                                         std::uint64_t seed,
                                         double slack_base) {
  if (k < 1 || k > family.rounds())
    throw std::invalid_argument("variance_sandwich_check: k out of range");

  const ReplicateTable table =
      sample_replicates(family, alphabet, replicates, seed, k);
  const BoundConstants bc = bound_constants(alphabet, k, std::min(k, 4));

  VarianceSandwich vs;
  vs.n = family.detectors();
  vs.r = family.rounds();
  vs.k = k;
  vs.replicates = replicates;

  const SummaryStats st = summarize(table.t);
  vs.var_emp = st.variance;
  vs.se_var = st.se_variance;

  for (int j = 1; j <= k; ++j) {
    const auto b_exact = family.pairwise_disjointness_exact(j);
    const double b_j =
        b_exact ? *b_exact
                : pairwise_disjointness(family, j, EstimateMethod::MonteCarlo,
                                        100000, mix64(seed))
                      .b_k;
    const double one_minus_b = 1.0 - b_j;
    const double floor_j = bc.floor(j, j) * one_minus_b;
    vs.floor_sum += floor_j;
    vs.cap_sum += one_minus_b;

    VarianceSandwich::Term term;
    term.j = j;
    const SummaryStats stj = summarize(table.terms[static_cast<std::size_t>(j - 1)]);
    term.var_emp = stj.variance;
    term.se_var = stj.se_variance;
    term.floor_j = floor_j;
    term.cap_j = one_minus_b;
    const double term_slack = slack_base + 4.0 * stj.se_variance;
    term.pass = term.var_emp >= term.floor_j - term_slack &&
                term.var_emp <= term.cap_j + term_slack;
    vs.terms.push_back(term);
  }
  vs.cap_sum *= static_cast<double>(k + 1);

  const double slack = slack_base + 4.0 * vs.se_var;
  vs.lower = vs.floor_sum - slack;
  vs.upper = vs.cap_sum + slack;
  vs.pass_lower = vs.var_emp >= vs.lower;
  vs.pass_upper = vs.var_emp <= vs.upper;
  return vs;
}

MeanConvergence mean_convergence_check(const FamilySpec& spec,
                                       const ConfigAlphabet& alphabet,
                                       std::span<const int> n_grid,
                                       const RoundSchedule& schedule,
                                       double tol, std::int64_t replicates,
                                       std::uint64_t seed) {
  if (n_grid.empty())
    throw std::invalid_argument("mean_convergence_check: empty grid");

  MeanConvergence mc;
  mc.capacity_time = 1.0 / alphabet.p_average();

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int n = n_grid[gi];
    const int r = spec.rounds_for(schedule, n);
    const SchemeFamily family = spec.make(n, r);

    MeanConvergence::Point pt;
    pt.n = n;
    pt.r = r;
    if (const auto avg = configuration_averaged_survival(family, alphabet)) {
      pt.mean_t = averaged_detection_from_survival(*avg).mean_t;
      pt.exact = true;
    } else {
      const std::uint64_t sub_seed =
          mix64(seed ^ (static_cast<std::uint64_t>(gi) + 101));
      const EnsembleReport rep =
          ensemble_report(family, alphabet, replicates, sub_seed);
      pt.mean_t = rep.mean_t;
      pt.se = rep.se_mean_t;
      pt.exact = false;
    }
    pt.gap = pt.mean_t - mc.capacity_time;
    mc.points.push_back(pt);
  }

  const auto& top = mc.points.back();
  bool monotone = true;
  for (std::size_t i = 1; i < mc.points.size(); ++i) {
    // Approach must not worsen beyond noise along the grid.
    const double noise =
        4.0 * (mc.points[i].se + mc.points[i - 1].se) + 1e-12;
    if (std::abs(mc.points[i].gap) >
        std::abs(mc.points[i - 1].gap) + noise + tol)
      monotone = false;
  }
  mc.achieves = std::abs(top.gap) <= tol + 4.0 * top.se && monotone;

  // Prediction from the distinctness condition: a_k -> 1 for every fixed k.
  bool predicted = true;
  const int n_big = std::max(1000000, n_grid.back());
  const int r_big = spec.rounds_for(schedule, n_big);
  const SchemeFamily big = spec.make(n_big, r_big);
  for (int kk = 1; kk <= std::min(5, big.rounds()); ++kk) {
    const auto a = big.prefix_distinctness_exact(kk);
    const double a_val =
        a ? *a
          : prefix_distinctness(big, kk, EstimateMethod::MonteCarlo, 20000,
                                mix64(seed))
                .a_k;
    if (a_val < 0.999) predicted = false;
  }
  mc.predicted_achieves = predicted;
  mc.matches_prediction = mc.achieves == mc.predicted_achieves;
  return mc;
}

}  // namespace detcap
