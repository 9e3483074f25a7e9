#pragma once
// Sweep vocabulary: family specifications instantiable across an n-grid and
// round-length schedules r(n).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "detcap/scheme.hpp"

namespace detcap {

// How the round length grows with the detector count.
struct RoundSchedule {
  enum class Rule { Sqrt, Log, Fixed };
  Rule rule = Rule::Sqrt;
  double log_c = 2.0;  // r = ceil(c ln n)
  int fixed_r = 50;

  int rounds_for(int n) const {
    int r = 1;
    switch (rule) {
      case Rule::Sqrt:
        r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        break;
      case Rule::Log:
        r = static_cast<int>(std::ceil(log_c * std::log(static_cast<double>(n))));
        break;
      case Rule::Fixed:
        r = fixed_r;
        break;
    }
    return std::max(1, r);
  }
};

// A family shape that can be instantiated for any (n, r) on a grid.
struct FamilySpec {
  SchemeKind kind = SchemeKind::UniformInjective;
  // BlockRepeat / HotStart structure; bases are instantiated on the fly.
  SchemeKind base_kind = SchemeKind::UniformInjective;
  int block = 2;
  int pinned = 0;
  bool allow_padding = true;
  std::optional<int> offset;  // RoundRobin

  // Largest feasible round length at n (injective sampling needs r <= n).
  int max_rounds(int n) const;

  // Clamped schedule application.
  int rounds_for(const RoundSchedule& schedule, int n) const {
    return std::min(schedule.rounds_for(n), max_rounds(n));
  }

  SchemeFamily make(int n, int r) const;
  std::string label() const;
};

// The six-family default catalog exercised by the verification harness.
std::vector<FamilySpec> default_catalog();

}  // namespace detcap
