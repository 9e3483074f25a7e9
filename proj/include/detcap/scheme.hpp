#pragma once
// Deterministic (n,r)-detection schemes and distributions over them.
//
// A scheme assigns one detector to each of the r slots of a round.  The
// family catalog covers the regimes that matter for the capacity theorem:
// sampling without replacement (UniformInjective), with replacement
// (IidUniform), cyclic scanning (RoundRobin), slot repetition (BlockRepeat),
// a pinned first pick (HotStart), and point masses (Fixed / CustomWeighted).
//
// Two scalar summaries characterize capacity achievement:
//   prefix distinctness  a_k = P(first k picks are all distinct)
//   pairwise disjointness b_k = P(two independent draws have disjoint
//                               k-prefix value sets)
// Closed forms are provided wherever the family admits them; Monte Carlo
// with a binomial standard error covers the rest.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "detcap/rng.hpp"

namespace detcap {

// Raised when an exact enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Slot-to-detector map; entries are 0-based detector indices in [0, n).
struct Scheme {
  std::vector<int> assignment;

  int rounds() const { return static_cast<int>(assignment.size()); }
  bool prefix_injective(int k) const;
};

enum class SchemeKind {
  UniformInjective,
  IidUniform,
  RoundRobin,
  BlockRepeat,
  HotStart,
  Fixed,
  CustomWeighted,
};

const char* to_string(SchemeKind kind);

class SchemeFamily {
 public:
  // Factories validate structural constraints (e.g. r <= n for injective
  // sampling, block | r unless padding is explicitly allowed).
  static SchemeFamily uniform_injective(int n, int r);
  static SchemeFamily iid_uniform(int n, int r);
  // Uniform random cyclic offset by default; `offset` pins it.
  static SchemeFamily round_robin(int n, int r,
                                  std::optional<int> offset = std::nullopt);
  // Total round length defaults to block * base.rounds().  An explicit
  // total with block not dividing it leaves a partial final block, which is
  // an error unless allow_padding is set.
  static SchemeFamily block_repeat(int block, SchemeFamily base,
                                   bool allow_padding = false,
                                   std::optional<int> total_rounds = std::nullopt);
  static SchemeFamily hot_start(int pinned, SchemeFamily base_on_rest);
  static SchemeFamily fixed(int n, Scheme scheme);
  static SchemeFamily custom_weighted(int n, std::vector<Scheme> schemes,
                                      std::vector<double> weights);

  SchemeKind kind() const { return kind_; }
  int detectors() const { return n_; }
  int rounds() const { return r_; }
  const SchemeFamily& base() const { return *base_; }
  int block() const { return block_; }
  int pinned() const { return pinned_; }
  std::optional<int> round_robin_offset() const { return rr_offset_; }
  const std::vector<Scheme>& schemes() const { return schemes_; }
  const std::vector<double>& weights() const { return weights_; }

  // True when every statistic of the family is invariant under relabeling
  // of the detectors (enables histogram-keyed caching of quenched values).
  bool exchangeable() const;

  Scheme sample(RngStream& rng) const;

  // a_k closed form, when the family admits one.
  std::optional<double> prefix_distinctness_exact(int k) const;
  // b_k closed form, when the family admits one.
  std::optional<double> pairwise_disjointness_exact(int k) const;

  // Human-readable label, e.g. "block_repeat(2,uniform_injective)".
  std::string label() const;

 private:
  SchemeFamily() = default;

  SchemeKind kind_ = SchemeKind::Fixed;
  int n_ = 0;
  int r_ = 0;
  std::shared_ptr<const SchemeFamily> base_;  // BlockRepeat / HotStart
  int block_ = 1;
  bool pad_ = false;
  int pinned_ = 0;
  std::optional<int> rr_offset_;
  std::vector<Scheme> schemes_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

struct PrefixDistinctness {
  int k = 0;
  double a_k = 0.0;
  bool exact = true;
  std::int64_t samples = 0;
  double std_error = 0.0;
};

struct PairwiseDisjointness {
  int k = 0;
  double b_k = 0.0;
  bool exact = true;
  std::int64_t samples = 0;
  double std_error = 0.0;
};

enum class EstimateMethod { Exact, MonteCarlo };

// a_k / b_k with the requested method.  Exact requests on families without a
// closed form throw std::runtime_error; Monte Carlo reports the binomial
// standard error sqrt(p(1-p)/N).
PrefixDistinctness prefix_distinctness(const SchemeFamily& family, int k,
                                       EstimateMethod method,
                                       std::int64_t samples = 100000,
                                       std::uint64_t seed = 1);
PairwiseDisjointness pairwise_disjointness(const SchemeFamily& family, int k,
                                           EstimateMethod method,
                                           std::int64_t samples = 100000,
                                           std::uint64_t seed = 1);

// Exact law of the j-prefix: all tuples with positive probability.  Throws
// BudgetError when the support would exceed `tuple_budget`, in which case
// callers should fall back to Monte Carlo paths.
struct PrefixLaw {
  std::vector<std::vector<int>> tuples;
  std::vector<double> probs;
};
PrefixLaw prefix_law(const SchemeFamily& family, int j,
                     std::int64_t tuple_budget = 10000000);

}  // namespace detcap
