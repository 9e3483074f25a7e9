#include "detcap/placement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detcap {

double GeometricPlacement::default_attenuation(double d) {
  return std::max(0.1, 1.0 - d);
}

Configuration place_and_quantize(const GeometricPlacement& placement) {
  if (placement.positions.empty())
    throw std::invalid_argument("place_and_quantize: no positions");
  if (!placement.attenuation)
    throw std::invalid_argument("place_and_quantize: no attenuation map");
  if (placement.alphabet == nullptr)
    throw std::invalid_argument("place_and_quantize: no alphabet");

  Configuration cfg;
  cfg.probs.reserve(placement.positions.size());
  cfg.letters.reserve(placement.positions.size());
  for (const auto& pos : placement.positions) {
    if (std::abs(pos[0]) > 0.5 || std::abs(pos[1]) > 0.5)
      throw std::invalid_argument(
          "place_and_quantize: position outside the unit square");
    const double d = std::hypot(pos[0], pos[1]);
    const double raw = placement.attenuation(d);
    if (!(raw >= 0.0 && raw <= 1.0))
      throw std::runtime_error(
          "place_and_quantize: attenuation output outside [0,1]");
    const int letter = placement.alphabet->nearest_index(raw);
    cfg.letters.push_back(letter);
    cfg.probs.push_back(
        placement.alphabet->values()[static_cast<std::size_t>(letter)]);
  }
  return cfg;
}

}  // namespace detcap
