#pragma once
// Multiplicity profiles: the partition recording how many times each distinct
// detector occurs in a scheme prefix.  Because configurations are iid, the
// configuration average of a survival product factorizes over the profile
// into a product of miss moments, so exact configuration-averaged means
// never need to touch the n^j tuple space.

#include <optional>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/scheme.hpp"

namespace detcap {

// A partition of j, parts sorted descending.
using Profile = std::vector<int>;

// All partitions of j (ascending count order is not guaranteed; each part
// list is sorted descending).
std::vector<Profile> partitions_of(int j);

// E_conf prod over parts of (1-p)^part = prod of miss moments.
double profile_moment_product(const Profile& profile,
                              const ConfigAlphabet& alphabet);

// Exact law of the multiplicity profile of the j-prefix, when the family
// admits one; pairs of (profile, probability).
struct ProfileLaw {
  std::vector<Profile> profiles;
  std::vector<double> probs;
};
std::optional<ProfileLaw> prefix_profile_law(const SchemeFamily& family, int j);

// out[j] = E_conf E_sch alpha_j for j = 0..r, assembled from miss moments.
// Uses profile laws where enumerable and an exponential-generating-function
// recurrence for iid-uniform picks (whose profile count would explode).
// Returns nullopt when the family has no exact route.
std::optional<std::vector<double>> configuration_averaged_survival(
    const SchemeFamily& family, const ConfigAlphabet& alphabet);

// Exact E_conf T(p) and E_conf S(p) from a configuration-averaged survival
// curve: T = sum_{j<r} avg[j] - r avg[r], S = 1 - avg[r].
struct AveragedDetection {
  double mean_t = 0.0;
  double mean_s = 0.0;
};
AveragedDetection averaged_detection_from_survival(
    const std::vector<double>& survival);

}  // namespace detcap
