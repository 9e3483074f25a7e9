#pragma once
// Optional geometric front-end: detectors placed in the unit square centered
// at the origin, with a monotone distance-to-probability map quantized onto
// the alphabet.  All analysis downstream operates on the resulting
// Configuration only.

#include <array>
#include <functional>
#include <vector>

#include "detcap/alphabet.hpp"

namespace detcap {

struct GeometricPlacement {
  std::vector<std::array<double, 2>> positions;      // inside [-1/2,1/2]^2
  std::function<double(double)> attenuation;         // distance -> raw prob
  const ConfigAlphabet* alphabet = nullptr;          // quantization target

  // Default map used by demos: d -> max(0.1, 1 - d).
  static double default_attenuation(double d);
};

// p_i = quantize(attenuation(|position_i|)).  Raw values outside [0,1] are a
// model error (std::runtime_error); positions outside the square are an
// argument error.
Configuration place_and_quantize(const GeometricPlacement& placement);

}  // namespace detcap
