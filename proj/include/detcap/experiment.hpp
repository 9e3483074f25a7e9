#pragma once
// Experiment runner: JSON config in, sweep table + verdicts + manifest out.
// sweep.csv and verdict.json are byte-identical for identical (config, seed)
// regardless of the worker count; manifest.json additionally records wall
// clock and the thread cap, so it is the one output allowed to differ.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detcap/alphabet.hpp"
#include "detcap/capacity.hpp"

namespace detcap {

inline constexpr const char* kDetcapVersion = "1.0.0";

struct ExperimentConfig {
  std::vector<double> alphabet_values;
  std::vector<double> alphabet_weights;  // empty = uniform
  std::vector<FamilySpec> families;
  RoundSchedule schedule;
  std::vector<int> n_grid;
  double epsilon = 0.05;
  double delta = 0.05;
  std::optional<double> target_s;  // absent = 1 / p_av
  std::int64_t replicates = 10000;
  std::uint64_t seed = 1;
  SweepOptions sweep;

  ConfigAlphabet make_alphabet() const {
    return ConfigAlphabet(alphabet_values, alphabet_weights);
  }

  // Throws std::runtime_error with a descriptive message on malformed input.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct RunArtifacts {
  std::vector<CapacityVerdict> verdicts;
  std::string sweep_csv_path;
  std::string verdict_json_path;
  std::string manifest_json_path;
};

RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::string& out_dir,
                            std::optional<std::uint64_t> seed_override = {});

// Fixed-format float used in all CSV output ("%.12g").
std::string format_csv_double(double v);

}  // namespace detcap
