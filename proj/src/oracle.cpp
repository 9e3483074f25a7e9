#include "detcap/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace detcap {

DetectionLaw oracle_pmf(const Scheme& scheme, const Configuration& config,
                        const OracleBudget& budget) {
  const int r = scheme.rounds();
  if (r > budget.max_outcome_rounds)
    throw BudgetError("oracle_pmf: 2^r outcome enumeration over budget");
  for (int d : scheme.assignment)
    if (d < 0 || d >= config.size())
      throw std::invalid_argument("oracle_pmf: scheme index out of range");

  DetectionLaw law;
  law.pmf.assign(static_cast<std::size_t>(r), 0.0);
  law.miss_mass = 0.0;
  for (std::uint32_t bits = 0; bits < (1u << r); ++bits) {
    double w = 1.0;
    int first = -1;
    for (int t = 0; t < r; ++t) {
      const double p =
          config.probs[static_cast<std::size_t>(scheme.assignment[t])];
      if (bits & (1u << t)) {
        w *= p;
        if (first < 0) first = t;
      } else {
        w *= 1.0 - p;
      }
    }
    if (first < 0)
      law.miss_mass += w;
    else
      law.pmf[static_cast<std::size_t>(first)] += w;
  }
  return law;
}

namespace {

void append_support(const SchemeFamily& family, const OracleBudget& budget,
                    SchemeSupport& out) {
  const int n = family.detectors();
  const int r = family.rounds();
  auto guard = [&](double count) {
    if (!(count <= static_cast<double>(budget.max_scheme_enum)))
      throw BudgetError("oracle_scheme_support: support over budget");
  };
  switch (family.kind()) {
    case SchemeKind::UniformInjective: {
      double count = 1.0;
      for (int i = 0; i < r; ++i) count *= static_cast<double>(n - i);
      guard(count);
      Scheme cur;
      cur.assignment.resize(static_cast<std::size_t>(r));
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      auto rec = [&](auto&& self, int depth) -> void {
        if (depth == r) {
          out.schemes.push_back(cur);
          out.probs.push_back(1.0 / count);
          return;
        }
        for (int d = 0; d < n; ++d) {
          if (used[static_cast<std::size_t>(d)]) continue;
          used[static_cast<std::size_t>(d)] = 1;
          cur.assignment[static_cast<std::size_t>(depth)] = d;
          self(self, depth + 1);
          used[static_cast<std::size_t>(d)] = 0;
        }
      };
      rec(rec, 0);
      return;
    }
    case SchemeKind::IidUniform: {
      const double count = std::pow(static_cast<double>(n), r);
      guard(count);
      Scheme cur;
      cur.assignment.resize(static_cast<std::size_t>(r));
      auto rec = [&](auto&& self, int depth) -> void {
        if (depth == r) {
          out.schemes.push_back(cur);
          out.probs.push_back(1.0 / count);
          return;
        }
        for (int d = 0; d < n; ++d) {
          cur.assignment[static_cast<std::size_t>(depth)] = d;
          self(self, depth + 1);
        }
      };
      rec(rec, 0);
      return;
    }
    case SchemeKind::RoundRobin: {
      const bool fixed = family.round_robin_offset().has_value();
      guard(fixed ? 1 : n);
      const int lo = fixed ? *family.round_robin_offset() : 0;
      const int hi = fixed ? lo + 1 : n;
      for (int o = lo; o < hi; ++o) {
        Scheme s;
        s.assignment.resize(static_cast<std::size_t>(r));
        for (int t = 0; t < r; ++t)
          s.assignment[static_cast<std::size_t>(t)] = (o + t) % n;
        out.schemes.push_back(std::move(s));
        out.probs.push_back(1.0 / static_cast<double>(hi - lo));
      }
      return;
    }
    case SchemeKind::BlockRepeat: {
      SchemeSupport base;
      append_support(family.base(), budget, base);
      const int m = family.block();
      for (std::size_t i = 0; i < base.schemes.size(); ++i) {
        Scheme s;
        s.assignment.resize(static_cast<std::size_t>(r));
        for (int t = 0; t < r; ++t)
          s.assignment[static_cast<std::size_t>(t)] =
              base.schemes[i].assignment[static_cast<std::size_t>(t / m)];
        out.schemes.push_back(std::move(s));
        out.probs.push_back(base.probs[i]);
      }
      return;
    }
    case SchemeKind::HotStart: {
      SchemeSupport base;
      append_support(family.base(), budget, base);
      const int pin = family.pinned();
      for (std::size_t i = 0; i < base.schemes.size(); ++i) {
        Scheme s;
        s.assignment.reserve(static_cast<std::size_t>(r));
        s.assignment.push_back(pin);
        for (int v : base.schemes[i].assignment)
          s.assignment.push_back(v < pin ? v : v + 1);
        out.schemes.push_back(std::move(s));
        out.probs.push_back(base.probs[i]);
      }
      return;
    }
    case SchemeKind::Fixed:
    case SchemeKind::CustomWeighted: {
      guard(static_cast<double>(family.schemes().size()));
      for (std::size_t i = 0; i < family.schemes().size(); ++i) {
        out.schemes.push_back(family.schemes()[i]);
        out.probs.push_back(family.weights()[i]);
      }
      return;
    }
  }
  throw std::logic_error("oracle_scheme_support: unreachable");
}

}  // namespace

SchemeSupport oracle_scheme_support(const SchemeFamily& family,
                                    const OracleBudget& budget) {
  SchemeSupport support;
  append_support(family, budget, support);
  return support;
}

double oracle_conf_moment(const SchemeFamily& family,
                          const ConfigAlphabet& alphabet, int n,
                          ConfStatistic statistic,
                          const OracleBudget& budget) {
  if (n != family.detectors())
    throw std::invalid_argument("oracle_conf_moment: n mismatch with family");
  const int L = alphabet.size();
  const double conf_count = std::pow(static_cast<double>(L), n);
  if (!(conf_count <= static_cast<double>(budget.max_config_enum)))
    throw BudgetError("oracle_conf_moment: configuration space over budget");

  const SchemeSupport support = oracle_scheme_support(family, budget);

  // Odometer over alphabet^n, accumulating E X and E X^2 of the per-config
  // scheme-averaged statistic X.
  std::vector<int> letter(static_cast<std::size_t>(n), 0);
  Configuration cfg;
  cfg.probs.assign(static_cast<std::size_t>(n), alphabet.values()[0]);
  double ex = 0.0, ex2 = 0.0;
  bool done = false;
  while (!done) {
    double pconf = 1.0;
    for (int i = 0; i < n; ++i) {
      const int l = letter[static_cast<std::size_t>(i)];
      cfg.probs[static_cast<std::size_t>(i)] =
          alphabet.values()[static_cast<std::size_t>(l)];
      pconf *= alphabet.weights()[static_cast<std::size_t>(l)];
    }
    double x = 0.0;
    for (std::size_t s = 0; s < support.schemes.size(); ++s) {
      const DetectionLaw law = oracle_pmf(support.schemes[s], cfg, budget);
      double value = 0.0;
      if (statistic == ConfStatistic::MeanS) {
        value = law.success_probability();
      } else {
        for (std::size_t k = 0; k < law.pmf.size(); ++k)
          value += static_cast<double>(k + 1) * law.pmf[k];
      }
      x += support.probs[s] * value;
    }
    ex += pconf * x;
    ex2 += pconf * x * x;

    done = true;
    for (int i = 0; i < n; ++i) {
      if (++letter[static_cast<std::size_t>(i)] < L) {
        done = false;
        break;
      }
      letter[static_cast<std::size_t>(i)] = 0;
    }
  }

  switch (statistic) {
    case ConfStatistic::MeanT:
    case ConfStatistic::MeanS:
      return ex;
    case ConfStatistic::VarT:
      return ex2 - ex * ex;
  }
  throw std::logic_error("oracle_conf_moment: unreachable");
}

}  // namespace detcap
