#include "detcap/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace detcap {

namespace {

constexpr double kWeightTol = 1e-12;

// Occupancy DP: law of the number of distinct values among k iid uniform
// draws from n.  occ[v] = P(#distinct = v).
std::vector<double> distinct_count_law(int n, int k) {
  std::vector<double> occ(static_cast<std::size_t>(k) + 1, 0.0);
  occ[0] = 1.0;
  for (int t = 0; t < k; ++t) {
    for (int v = std::min(t, k - 1); v >= 0; --v) {
      const double p = occ[static_cast<std::size_t>(v)];
      if (p == 0.0) continue;
      occ[static_cast<std::size_t>(v)] = 0.0;
      occ[static_cast<std::size_t>(v + 1)] +=
          p * static_cast<double>(n - v) / static_cast<double>(n);
      occ[static_cast<std::size_t>(v)] +=
          p * static_cast<double>(v) / static_cast<double>(n);
    }
  }
  return occ;
}

bool prefix_sets_disjoint(const Scheme& a, const Scheme& b, int k,
                          std::vector<char>& mark) {
  std::fill(mark.begin(), mark.end(), 0);
  for (int t = 0; t < k; ++t) mark[static_cast<std::size_t>(a.assignment[t])] = 1;
  for (int t = 0; t < k; ++t)
    if (mark[static_cast<std::size_t>(b.assignment[t])]) return false;
  return true;
}

}  // namespace

bool Scheme::prefix_injective(int k) const {
  std::vector<int> seen;
  seen.reserve(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) {
    const int d = assignment[static_cast<std::size_t>(t)];
    if (std::find(seen.begin(), seen.end(), d) != seen.end()) return false;
    seen.push_back(d);
  }
  return true;
}

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::UniformInjective: return "uniform_injective";
    case SchemeKind::IidUniform: return "iid_uniform";
    case SchemeKind::RoundRobin: return "round_robin";
    case SchemeKind::BlockRepeat: return "block_repeat";
    case SchemeKind::HotStart: return "hot_start";
    case SchemeKind::Fixed: return "fixed";
    case SchemeKind::CustomWeighted: return "custom_weighted";
  }
  return "unknown";
}

SchemeFamily SchemeFamily::uniform_injective(int n, int r) {
  if (n < 1 || r < 1)
    throw std::invalid_argument("uniform_injective: n and r must be >= 1");
  if (r > n)
    throw std::invalid_argument(
        "uniform_injective: r <= n required (sampling without replacement)");
  SchemeFamily f;
  f.kind_ = SchemeKind::UniformInjective;
  f.n_ = n;
  f.r_ = r;
  return f;
}

SchemeFamily SchemeFamily::iid_uniform(int n, int r) {
  if (n < 1 || r < 1)
    throw std::invalid_argument("iid_uniform: n and r must be >= 1");
  SchemeFamily f;
  f.kind_ = SchemeKind::IidUniform;
  f.n_ = n;
  f.r_ = r;
  return f;
}

SchemeFamily SchemeFamily::round_robin(int n, int r, std::optional<int> offset) {
  if (n < 1 || r < 1)
    throw std::invalid_argument("round_robin: n and r must be >= 1");
  if (offset && (*offset < 0 || *offset >= n))
    throw std::invalid_argument("round_robin: offset out of range");
  SchemeFamily f;
  f.kind_ = SchemeKind::RoundRobin;
  f.n_ = n;
  f.r_ = r;
  f.rr_offset_ = offset;
  return f;
}

SchemeFamily SchemeFamily::block_repeat(int block, SchemeFamily base,
                                        bool allow_padding,
                                        std::optional<int> total_rounds) {
  if (block < 1) throw std::invalid_argument("block_repeat: block must be >= 1");
  const int r = total_rounds.value_or(block * base.r_);
  if ((r + block - 1) / block != base.r_)
    throw std::invalid_argument(
        "block_repeat: base length must equal ceil(r/block)");
  if (r % block != 0 && !allow_padding)
    throw std::invalid_argument(
        "block_repeat: block does not divide r (set allow_padding to permit "
        "a partial final block)");
  SchemeFamily f;
  f.kind_ = SchemeKind::BlockRepeat;
  f.n_ = base.n_;
  f.r_ = r;
  f.block_ = block;
  f.pad_ = allow_padding;
  f.base_ = std::make_shared<const SchemeFamily>(std::move(base));
  return f;
}

SchemeFamily SchemeFamily::hot_start(int pinned, SchemeFamily base_on_rest) {
  const int n = base_on_rest.n_ + 1;
  if (pinned < 0 || pinned >= n)
    throw std::invalid_argument("hot_start: pinned index out of range");
  SchemeFamily f;
  f.kind_ = SchemeKind::HotStart;
  f.n_ = n;
  f.r_ = base_on_rest.r_ + 1;
  f.pinned_ = pinned;
  f.base_ = std::make_shared<const SchemeFamily>(std::move(base_on_rest));
  return f;
}

SchemeFamily SchemeFamily::fixed(int n, Scheme scheme) {
  if (scheme.assignment.empty())
    throw std::invalid_argument("fixed: empty scheme");
  for (int d : scheme.assignment)
    if (d < 0 || d >= n)
      throw std::invalid_argument("fixed: detector index out of range");
  SchemeFamily f;
  f.kind_ = SchemeKind::Fixed;
  f.n_ = n;
  f.r_ = scheme.rounds();
  f.schemes_.push_back(std::move(scheme));
  f.weights_.push_back(1.0);
  f.cumulative_.push_back(1.0);
  return f;
}

SchemeFamily SchemeFamily::custom_weighted(int n, std::vector<Scheme> schemes,
                                           std::vector<double> weights) {
  if (schemes.empty())
    throw std::invalid_argument("custom_weighted: no schemes");
  if (schemes.size() != weights.size())
    throw std::invalid_argument("custom_weighted: schemes/weights mismatch");
  const int r = schemes.front().rounds();
  double wsum = 0.0;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    if (schemes[i].rounds() != r)
      throw std::invalid_argument("custom_weighted: mixed round lengths");
    for (int d : schemes[i].assignment)
      if (d < 0 || d >= n)
        throw std::invalid_argument("custom_weighted: index out of range");
    if (weights[i] < 0.0)
      throw std::invalid_argument("custom_weighted: negative weight");
    wsum += weights[i];
  }
  if (std::abs(wsum - 1.0) > kWeightTol)
    throw std::invalid_argument("custom_weighted: weights must sum to 1");
  SchemeFamily f;
  f.kind_ = SchemeKind::CustomWeighted;
  f.n_ = n;
  f.r_ = r;
  f.schemes_ = std::move(schemes);
  f.weights_ = std::move(weights);
  f.cumulative_.resize(f.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.weights_.size(); ++i) {
    acc += f.weights_[i];
    f.cumulative_[i] = acc;
  }
  f.cumulative_.back() = 1.0;
  return f;
}

bool SchemeFamily::exchangeable() const {
  switch (kind_) {
    case SchemeKind::UniformInjective:
    case SchemeKind::IidUniform:
      return true;
    case SchemeKind::BlockRepeat:
      return base_->exchangeable();
    default:
      return false;
  }
}

Scheme SchemeFamily::sample(RngStream& rng) const {
  Scheme s;
  s.assignment.resize(static_cast<std::size_t>(r_));
  switch (kind_) {
    case SchemeKind::UniformInjective: {
      // Partial Fisher-Yates: first r entries of a uniform permutation.
      std::vector<int> pool(static_cast<std::size_t>(n_));
      std::iota(pool.begin(), pool.end(), 0);
      for (int t = 0; t < r_; ++t) {
        const int j = t + rng.uniform_index(n_ - t);
        std::swap(pool[static_cast<std::size_t>(t)],
                  pool[static_cast<std::size_t>(j)]);
        s.assignment[static_cast<std::size_t>(t)] =
            pool[static_cast<std::size_t>(t)];
      }
      return s;
    }
    case SchemeKind::IidUniform: {
      for (int t = 0; t < r_; ++t)
        s.assignment[static_cast<std::size_t>(t)] = rng.uniform_index(n_);
      return s;
    }
    case SchemeKind::RoundRobin: {
      const int o = rr_offset_ ? *rr_offset_ : rng.uniform_index(n_);
      for (int t = 0; t < r_; ++t)
        s.assignment[static_cast<std::size_t>(t)] = (o + t) % n_;
      return s;
    }
    case SchemeKind::BlockRepeat: {
      const Scheme base = base_->sample(rng);
      for (int t = 0; t < r_; ++t)
        s.assignment[static_cast<std::size_t>(t)] =
            base.assignment[static_cast<std::size_t>(t / block_)];
      return s;
    }
    case SchemeKind::HotStart: {
      const Scheme base = base_->sample(rng);
      s.assignment[0] = pinned_;
      for (int t = 1; t < r_; ++t) {
        const int v = base.assignment[static_cast<std::size_t>(t - 1)];
        s.assignment[static_cast<std::size_t>(t)] = v < pinned_ ? v : v + 1;
      }
      return s;
    }
    case SchemeKind::Fixed:
      return schemes_.front();
    case SchemeKind::CustomWeighted:
      return schemes_[static_cast<std::size_t>(
          rng.categorical_from_cumulative(cumulative_))];
  }
  throw std::logic_error("sample: unreachable");
}

std::optional<double> SchemeFamily::prefix_distinctness_exact(int k) const {
  if (k < 1 || k > r_)
    throw std::invalid_argument("prefix_distinctness: k out of range");
  if (k == 1) return 1.0;  // a single pick is trivially distinct
  switch (kind_) {
    case SchemeKind::UniformInjective:
      return 1.0;
    case SchemeKind::IidUniform: {
      double a = 1.0;
      for (int i = 1; i < k; ++i)
        a *= static_cast<double>(std::max(0, n_ - i)) / static_cast<double>(n_);
      return a;
    }
    case SchemeKind::RoundRobin:
      return k <= n_ ? 1.0 : 0.0;
    case SchemeKind::BlockRepeat:
      if (block_ >= 2) return 0.0;  // slots 1 and 2 share a base pick
      return base_->prefix_distinctness_exact(k);
    case SchemeKind::HotStart:
      // The pin never collides with picks drawn on the reduced set.
      return base_->prefix_distinctness_exact(k - 1);
    case SchemeKind::Fixed:
      return schemes_.front().prefix_injective(k) ? 1.0 : 0.0;
    case SchemeKind::CustomWeighted: {
      double a = 0.0;
      for (std::size_t i = 0; i < schemes_.size(); ++i)
        if (schemes_[i].prefix_injective(k)) a += weights_[i];
      return a;
    }
  }
  return std::nullopt;
}

std::optional<double> SchemeFamily::pairwise_disjointness_exact(int k) const {
  if (k < 1 || k > r_)
    throw std::invalid_argument("pairwise_disjointness: k out of range");
  switch (kind_) {
    case SchemeKind::UniformInjective: {
      if (2 * k > n_) return 0.0;
      double b = 1.0;
      for (int i = 0; i < k; ++i)
        b *= static_cast<double>(n_ - k - i) / static_cast<double>(n_ - i);
      return b;
    }
    case SchemeKind::IidUniform: {
      const auto occ = distinct_count_law(n_, k);
      double b = 0.0;
      for (int v = 0; v <= k; ++v)
        b += occ[static_cast<std::size_t>(v)] *
             std::pow(static_cast<double>(n_ - v) / static_cast<double>(n_), k);
      return b;
    }
    case SchemeKind::RoundRobin: {
      if (rr_offset_) return 0.0;  // identical arcs always intersect
      if (k >= n_) return 0.0;
      // Two arcs of length k on the n-cycle are disjoint for n-2k+1 of the
      // n equally likely relative offsets.
      return static_cast<double>(std::max(0, n_ - 2 * k + 1)) /
             static_cast<double>(n_);
    }
    case SchemeKind::BlockRepeat: {
      // The k-prefix value set equals the base ceil(k/m)-prefix value set.
      const int kb = (k + block_ - 1) / block_;
      return base_->pairwise_disjointness_exact(kb);
    }
    case SchemeKind::HotStart:
      return 0.0;  // both copies contain the pinned detector
    case SchemeKind::Fixed:
      return 0.0;
    case SchemeKind::CustomWeighted: {
      std::vector<char> mark(static_cast<std::size_t>(n_), 0);
      double b = 0.0;
      for (std::size_t i = 0; i < schemes_.size(); ++i)
        for (std::size_t j = 0; j < schemes_.size(); ++j)
          if (prefix_sets_disjoint(schemes_[i], schemes_[j], k, mark))
            b += weights_[i] * weights_[j];
      return b;
    }
  }
  return std::nullopt;
}

std::string SchemeFamily::label() const {
  switch (kind_) {
    case SchemeKind::BlockRepeat:
      return "block_repeat(" + std::to_string(block_) + "," + base_->label() +
             ")";
    case SchemeKind::HotStart:
      return "hot_start(" + std::to_string(pinned_ + 1) + "," + base_->label() +
             ")";
    case SchemeKind::RoundRobin:
      if (rr_offset_)
        return "round_robin@" + std::to_string(*rr_offset_);
      return "round_robin";
    default:
      return to_string(kind_);
  }
}

PrefixDistinctness prefix_distinctness(const SchemeFamily& family, int k,
                                       EstimateMethod method,
                                       std::int64_t samples,
                                       std::uint64_t seed) {
  PrefixDistinctness out;
  out.k = k;
  if (method == EstimateMethod::Exact) {
    const auto a = family.prefix_distinctness_exact(k);
    if (!a) throw std::runtime_error("prefix_distinctness: no closed form");
    out.a_k = *a;
    return out;
  }
  if (k < 1 || k > family.rounds())
    throw std::invalid_argument("prefix_distinctness: k out of range");
  if (samples < 1)
    throw std::invalid_argument("prefix_distinctness: samples must be >= 1");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Scheme,
                                      static_cast<std::uint64_t>(i));
    if (family.sample(rng).prefix_injective(k)) ++hits;
  }
  out.exact = false;
  out.samples = samples;
  out.a_k = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error =
      std::sqrt(out.a_k * (1.0 - out.a_k) / static_cast<double>(samples));
  return out;
}

PairwiseDisjointness pairwise_disjointness(const SchemeFamily& family, int k,
                                           EstimateMethod method,
                                           std::int64_t samples,
                                           std::uint64_t seed) {
  PairwiseDisjointness out;
  out.k = k;
  if (method == EstimateMethod::Exact) {
    const auto b = family.pairwise_disjointness_exact(k);
    if (!b) throw std::runtime_error("pairwise_disjointness: no closed form");
    out.b_k = *b;
    return out;
  }
  if (k < 1 || k > family.rounds())
    throw std::invalid_argument("pairwise_disjointness: k out of range");
  if (samples < 1)
    throw std::invalid_argument("pairwise_disjointness: samples must be >= 1");
  std::int64_t hits = 0;
  std::vector<char> mark(static_cast<std::size_t>(family.detectors()), 0);
  for (std::int64_t i = 0; i < samples; ++i) {
    RngStream rng = RngStream::derive(seed, StreamDomain::Scheme,
                                      static_cast<std::uint64_t>(i));
    const Scheme s1 = family.sample(rng);
    const Scheme s2 = family.sample(rng);
    if (prefix_sets_disjoint(s1, s2, k, mark)) ++hits;
  }
  out.exact = false;
  out.samples = samples;
  out.b_k = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error =
      std::sqrt(out.b_k * (1.0 - out.b_k) / static_cast<double>(samples));
  return out;
}

namespace {

void require_budget(double support, std::int64_t budget, const char* what) {
  if (!(support <= static_cast<double>(budget)))
    throw BudgetError(std::string(what) +
                      ": enumeration budget exceeded; use Monte Carlo paths");
}

void enumerate_tuples(int n, int j, bool distinct,
                      std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(j));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == j) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d < n; ++d) {
      if (distinct && used[static_cast<std::size_t>(d)]) continue;
      cur[static_cast<std::size_t>(depth)] = d;
      used[static_cast<std::size_t>(d)] = 1;
      self(self, depth + 1);
      used[static_cast<std::size_t>(d)] = 0;
    }
  };
  rec(rec, 0);
}

}  // namespace

PrefixLaw prefix_law(const SchemeFamily& family, int j,
                     std::int64_t tuple_budget) {
  if (j < 1 || j > family.rounds())
    throw std::invalid_argument("prefix_law: j out of range");
  const int n = family.detectors();
  PrefixLaw law;
  switch (family.kind()) {
    case SchemeKind::UniformInjective: {
      double support = 1.0;
      for (int i = 0; i < j; ++i) support *= static_cast<double>(n - i);
      require_budget(support, tuple_budget, "prefix_law");
      enumerate_tuples(n, j, /*distinct=*/true, law.tuples);
      law.probs.assign(law.tuples.size(), 1.0 / support);
      return law;
    }
    case SchemeKind::IidUniform: {
      require_budget(std::pow(static_cast<double>(n), j), tuple_budget,
                     "prefix_law");
      enumerate_tuples(n, j, /*distinct=*/false, law.tuples);
      law.probs.assign(law.tuples.size(),
                       std::pow(static_cast<double>(n), -j));
      return law;
    }
    case SchemeKind::RoundRobin: {
      const bool fixed_offset = family.round_robin_offset().has_value();
      const int count = fixed_offset ? 1 : n;
      require_budget(count, tuple_budget, "prefix_law");
      for (int o = fixed_offset ? *family.round_robin_offset() : 0;
           o < (fixed_offset ? *family.round_robin_offset() + 1 : n); ++o) {
        std::vector<int> t(static_cast<std::size_t>(j));
        for (int s = 0; s < j; ++s) t[static_cast<std::size_t>(s)] = (o + s) % n;
        law.tuples.push_back(std::move(t));
        law.probs.push_back(1.0 / static_cast<double>(count));
      }
      return law;
    }
    case SchemeKind::BlockRepeat: {
      const int m = family.block();
      const int jb = (j + m - 1) / m;
      const PrefixLaw base = prefix_law(family.base(), jb, tuple_budget);
      for (std::size_t i = 0; i < base.tuples.size(); ++i) {
        std::vector<int> t(static_cast<std::size_t>(j));
        for (int s = 0; s < j; ++s)
          t[static_cast<std::size_t>(s)] =
              base.tuples[i][static_cast<std::size_t>(s / m)];
        law.tuples.push_back(std::move(t));
        law.probs.push_back(base.probs[i]);
      }
      return law;
    }
    case SchemeKind::HotStart: {
      const int pin = family.pinned();
      if (j == 1) {
        law.tuples.push_back({pin});
        law.probs.push_back(1.0);
        return law;
      }
      const PrefixLaw base = prefix_law(family.base(), j - 1, tuple_budget);
      for (std::size_t i = 0; i < base.tuples.size(); ++i) {
        std::vector<int> t;
        t.reserve(static_cast<std::size_t>(j));
        t.push_back(pin);
        for (int v : base.tuples[i]) t.push_back(v < pin ? v : v + 1);
        law.tuples.push_back(std::move(t));
        law.probs.push_back(base.probs[i]);
      }
      return law;
    }
    case SchemeKind::Fixed:
    case SchemeKind::CustomWeighted: {
      std::map<std::vector<int>, double> merged;
      for (std::size_t i = 0; i < family.schemes().size(); ++i) {
        std::vector<int> t(family.schemes()[i].assignment.begin(),
                           family.schemes()[i].assignment.begin() + j);
        merged[std::move(t)] += family.weights()[i];
      }
      for (auto& [t, p] : merged) {
        law.tuples.push_back(t);
        law.probs.push_back(p);
      }
      return law;
    }
  }
  throw std::logic_error("prefix_law: unreachable");
}

}  // namespace detcap
