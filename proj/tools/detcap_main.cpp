// detcap: exact and Monte Carlo analysis of randomized detection schemes.
//
// Subcommands: exact, simulate, scheme-stats, ensemble, run, verify.
// Machine-readable output goes to stdout (JSON or CSV); diagnostics to
// stderr.  Exit codes: 0 success, 1 failed checks or runtime errors,
// 2 usage/config errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "detcap/capacity.hpp"
#include "detcap/detection.hpp"
#include "detcap/ensemble.hpp"
#include "detcap/experiment.hpp"
#include "detcap/oracle.hpp"
#include "detcap/profile.hpp"
#include "detcap/quenched.hpp"
#include "detcap/verify.hpp"

namespace {

using detcap::SchemeKind;
using ordered_json = nlohmann::ordered_json;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

detcap::Scheme load_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scheme file not found: " + path);
  ordered_json j = ordered_json::parse(in);
  detcap::Scheme s;
  for (int d : j.at("assignment").get<std::vector<int>>())
    s.assignment.push_back(d - 1);  // files use 1-based detector indices
  if (s.assignment.empty()) throw std::runtime_error("scheme file: empty assignment");
  return s;
}

detcap::Configuration load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  ordered_json j = ordered_json::parse(in);
  detcap::Configuration cfg;
  cfg.probs = j.at("probs").get<std::vector<double>>();
  if (cfg.probs.empty()) throw std::runtime_error("config file: empty probs");
  for (double p : cfg.probs)
    if (!(p > 0.0 && p < 1.0))
      throw std::runtime_error("config file: probs must lie in (0,1)");
  return cfg;
}

ordered_json law_to_json(const detcap::DetectionLaw& law, double mean_t) {
  ordered_json out;
  out["pmf"] = law.pmf;
  out["mass_at_infinity"] = law.miss_mass;
  out["expected_truncated_time"] = mean_t;
  out["success_probability"] = law.success_probability();
  return out;
}

// Flatten a JSON object into key,value CSV rows (arrays become key_i).
std::string to_kv_csv(const ordered_json& j) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_array()) {
      int i = 0;
      for (const auto& item : value)
        os << key << '_' << ++i << ',' << item.dump() << '\n';
    } else {
      os << key << ',' << value.dump() << '\n';
    }
  }
  return os.str();
}

// Route a JSON payload to stdout or --out in the requested format.
void emit(const ordered_json& payload, const std::string& format,
          const std::string& out_path) {
  const std::string text =
      format == "csv" ? to_kv_csv(payload) : payload.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write output file: " + out_path);
  f << text;
}

struct FamilyCliOptions {
  std::string kind = "uniform_injective";
  std::string base = "uniform_injective";
  int block = 2;
  int pin = 1;
  int offset = -1;  // <0 = uniform offset
  bool allow_padding = true;
};

detcap::FamilySpec spec_from_cli(const FamilyCliOptions& opt) {
  auto kind_of = [](const std::string& s) {
    if (s == "uniform_injective") return SchemeKind::UniformInjective;
    if (s == "iid_uniform") return SchemeKind::IidUniform;
    if (s == "round_robin") return SchemeKind::RoundRobin;
    if (s == "block_repeat") return SchemeKind::BlockRepeat;
    if (s == "hot_start") return SchemeKind::HotStart;
    if (s == "fixed") return SchemeKind::Fixed;
    throw CLI::ValidationError("--family", "unknown family kind '" + s + "'");
  };
  detcap::FamilySpec spec;
  spec.kind = kind_of(opt.kind);
  spec.base_kind = kind_of(opt.base);
  spec.block = opt.block;
  spec.pinned = opt.pin - 1;
  spec.allow_padding = opt.allow_padding;
  if (opt.offset >= 0) spec.offset = opt.offset;
  return spec;
}

int cmd_exact(const std::string& scheme_file, const std::string& config_file,
              bool demo, const std::string& format, const std::string& out) {
  detcap::Scheme scheme;
  detcap::Configuration config;
  if (demo) {
    scheme.assignment = {0, 1};
    config.probs = {0.5, 0.5};
  } else {
    if (scheme_file.empty() || config_file.empty())
      throw CLI::ValidationError(
          "exact", "need --scheme-file and --config-file (or --demo)");
    scheme = load_scheme(scheme_file);
    config = load_config(config_file);
  }
  const detcap::DetectionLaw law = detcap::detection_law(scheme, config);
  const double mean = detcap::expected_detection_time(scheme, config);
  emit(law_to_json(law, mean), format, out);
  return 0;
}

int cmd_simulate(const std::string& scheme_file, const std::string& config_file,
                 bool demo, std::uint64_t seed, std::int64_t replicates,
                 const std::string& format, const std::string& out) {
  detcap::Scheme scheme;
  detcap::Configuration config;
  if (demo) {
    scheme.assignment = {0, 1};
    config.probs = {0.5, 0.5};
  } else {
    if (scheme_file.empty() || config_file.empty())
      throw CLI::ValidationError(
          "simulate", "need --scheme-file and --config-file (or --demo)");
    scheme = load_scheme(scheme_file);
    config = load_config(config_file);
  }
  if (replicates <= 1) {
    detcap::RngStream rng =
        detcap::RngStream::derive(seed, detcap::StreamDomain::Decision, 0);
    const detcap::DecisionTrace trace =
        detcap::simulate_round(scheme, config, rng);
    ordered_json payload;
    payload["decisions"] = trace.decisions;
    if (trace.detection_time)
      payload["detection_time"] = *trace.detection_time;
    else
      payload["detection_time"] = nullptr;
    emit(payload, format, out);
    return 0;
  }
  const int r = scheme.rounds();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(r) + 1, 0);
  for (std::int64_t i = 0; i < replicates; ++i) {
    detcap::RngStream rng = detcap::RngStream::derive(
        seed, detcap::StreamDomain::Decision, static_cast<std::uint64_t>(i));
    const auto trace = detcap::simulate_round(scheme, config, rng);
    if (trace.detection_time)
      ++counts[static_cast<std::size_t>(*trace.detection_time - 1)];
    else
      ++counts[static_cast<std::size_t>(r)];
  }
  ordered_json payload;
  payload["replicates"] = replicates;
  std::vector<double> pmf(static_cast<std::size_t>(r));
  double mean = 0.0;
  for (int k = 0; k < r; ++k) {
    pmf[static_cast<std::size_t>(k)] =
        static_cast<double>(counts[static_cast<std::size_t>(k)]) /
        static_cast<double>(replicates);
    mean += (k + 1) * pmf[static_cast<std::size_t>(k)];
  }
  payload["empirical_pmf"] = pmf;
  payload["empirical_mass_at_infinity"] =
      static_cast<double>(counts[static_cast<std::size_t>(r)]) /
      static_cast<double>(replicates);
  payload["empirical_truncated_mean"] = mean;
  emit(payload, format, out);
  return 0;
}

int cmd_scheme_stats(const FamilyCliOptions& fam, int n, int r, int k,
                     const std::string& method, std::int64_t samples,
                     std::uint64_t seed, const std::string& format,
                     const std::string& out) {
  const detcap::FamilySpec spec = spec_from_cli(fam);
  const detcap::SchemeFamily family = spec.make(n, r);
  const detcap::EstimateMethod em = method == "exact"
                                        ? detcap::EstimateMethod::Exact
                                        : detcap::EstimateMethod::MonteCarlo;
  const auto a = detcap::prefix_distinctness(family, k, em, samples, seed);
  const auto b =
      detcap::pairwise_disjointness(family, k, em, samples, detcap::mix64(seed));
  ordered_json payload;
  payload["k"] = k;
  payload["a_k"] = a.a_k;
  payload["b_k"] = b.b_k;
  payload["stderr"] = std::max(a.std_error, b.std_error);
  emit(payload, format, out);
  return 0;
}

int cmd_ensemble(const FamilyCliOptions& fam, const std::string& alphabet_csv,
                 const std::string& weights_csv, const std::string& n_csv,
                 int r_flag, std::int64_t replicates, int k,
                 std::uint64_t seed, const std::string& out_dir) {
  const detcap::ConfigAlphabet alphabet(parse_double_list(alphabet_csv),
                                        parse_double_list(weights_csv));
  const detcap::FamilySpec spec = spec_from_cli(fam);
  const std::vector<int> ns = parse_int_list(n_csv);
  if (ns.empty()) throw CLI::ValidationError("--n", "need at least one size");

  std::ostringstream csv;
  csv << "n,r,mean_T,se_mean,var_T,se_var,mean_S,exact_mean_T\n";
  ordered_json bound_reports = ordered_json::array();
  detcap::RoundSchedule schedule;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    const int r = r_flag > 0 ? std::min(r_flag, spec.max_rounds(n))
                             : spec.rounds_for(schedule, n);
    const detcap::SchemeFamily family = spec.make(n, r);
    const detcap::EnsembleReport rep = detcap::ensemble_report(
        family, alphabet, replicates,
        detcap::mix64(seed ^ static_cast<std::uint64_t>(i)));
    csv << rep.n << ',' << rep.r << ','
        << detcap::format_csv_double(rep.mean_t) << ','
        << detcap::format_csv_double(rep.se_mean_t) << ','
        << detcap::format_csv_double(rep.var_t) << ','
        << detcap::format_csv_double(rep.se_var_t) << ','
        << detcap::format_csv_double(rep.mean_s) << ',';
    if (rep.exact_mean_t) csv << detcap::format_csv_double(*rep.exact_mean_t);
    csv << '\n';

    const detcap::VarianceSandwich vs = detcap::variance_sandwich_check(
        family, alphabet, std::min(k, r), replicates,
        detcap::mix64(seed ^ (static_cast<std::uint64_t>(i) + 1000)));
    ordered_json b;
    b["n"] = n;
    b["r"] = r;
    b["var_T"] = vs.var_emp;
    b["lower"] = vs.lower;
    b["upper"] = vs.upper;
    b["pass_lower"] = vs.pass_lower;
    b["pass_upper"] = vs.pass_upper;
    bound_reports.push_back(std::move(b));
  }
  ordered_json report;
  report["family"] = spec.label();
  report["bound_checks"] = std::move(bound_reports);
  if (out_dir.empty()) {
    std::cout << csv.str();
    std::cerr << report.dump(2) << '\n';
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(std::filesystem::path(out_dir) / "ensemble.csv",
                    std::ios::binary);
    f << csv.str();
  }
  {
    std::ofstream f(std::filesystem::path(out_dir) / "bounds.json",
                    std::ios::binary);
    f << report.dump(2) << '\n';
  }
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  const detcap::ExperimentConfig cfg =
      detcap::ExperimentConfig::from_json_file(config_path);
  const detcap::RunArtifacts artifacts =
      detcap::run_experiment(cfg, out_dir, seed);
  ordered_json out;
  out["sweep_csv"] = artifacts.sweep_csv_path;
  out["verdict_json"] = artifacts.verdict_json_path;
  out["manifest_json"] = artifacts.manifest_json_path;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : artifacts.verdicts) {
    verdicts.push_back({{"family", v.family_label},
                        {"verdict", detcap::to_string(v.verdict)},
                        {"predicted", detcap::to_string(v.predicted)}});
  }
  out["verdicts"] = std::move(verdicts);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_verify(bool fast, std::uint64_t seed) {
  const auto results = detcap::run_invariant_suite(fast, seed);
  bool all_pass = true;
  for (const auto& res : results) {
    std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name;
    if (!res.detail.empty()) std::cout << ": " << res.detail;
    std::cout << '\n';
    all_pass = all_pass && res.pass;
  }
  std::cout << (all_pass ? "all checks passed" : "CHECKS FAILED") << '\n';
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"detcap: detection capacity of multidetector networks"};
  app.require_subcommand(1);

  // exact
  auto* exact = app.add_subcommand(
      "exact", "closed-form detection law for a fixed scheme/configuration");
  std::string scheme_file, config_file, exact_format = "json", exact_out;
  bool demo = false;
  exact->add_option("--scheme-file", scheme_file, "JSON {\"assignment\": [1-based indices]}");
  exact->add_option("--config-file", config_file, "JSON {\"probs\": [...]}");
  exact->add_flag("--demo", demo, "bundled 2-detector example");
  exact->add_option("--format", exact_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  exact->add_option("--out", exact_out, "write output to a file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Bernoulli round simulation");
  std::string sim_scheme, sim_config, sim_format = "json", sim_out;
  bool sim_demo = false;
  std::uint64_t sim_seed = 1;
  std::int64_t sim_reps = 1;
  simulate->add_option("--scheme-file", sim_scheme, "scheme JSON");
  simulate->add_option("--config-file", sim_config, "configuration JSON");
  simulate->add_flag("--demo", sim_demo, "bundled 2-detector example");
  simulate->add_option("--seed", sim_seed, "rng seed");
  simulate->add_option("--replicates", sim_reps, "rounds to simulate");
  simulate->add_option("--format", sim_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--out", sim_out, "write output to a file");

  // scheme-stats
  auto* stats = app.add_subcommand(
      "scheme-stats", "prefix distinctness a_k and pairwise disjointness b_k");
  FamilyCliOptions stats_fam;
  int stats_n = 100, stats_r = 10, stats_k = 3;
  std::string stats_method = "exact";
  std::int64_t stats_samples = 100000;
  std::uint64_t stats_seed = 1;
  stats->add_option("--family", stats_fam.kind, "family kind");
  stats->add_option("--base", stats_fam.base, "base kind (block_repeat/hot_start)");
  stats->add_option("--block", stats_fam.block, "block length");
  stats->add_option("--pin", stats_fam.pin, "pinned detector (1-based)");
  stats->add_option("--offset", stats_fam.offset, "fixed cyclic offset (>=0)");
  stats->add_option("--n", stats_n, "detector count");
  stats->add_option("--r", stats_r, "round length");
  stats->add_option("--k", stats_k, "prefix length");
  stats->add_option("--method", stats_method, "exact|mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  stats->add_option("--samples", stats_samples, "Monte Carlo samples");
  stats->add_option("--seed", stats_seed, "rng seed");
  std::string stats_format = "json", stats_out;
  stats->add_option("--format", stats_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  stats->add_option("--out", stats_out, "write output to a file");

  // ensemble
  auto* ensemble = app.add_subcommand(
      "ensemble", "configuration-ensemble statistics and bound checks");
  FamilyCliOptions ens_fam;
  std::string ens_alphabet = "0.2,0.8", ens_weights, ens_n = "100";
  int ens_r = 0, ens_k = 3;
  std::int64_t ens_reps = 10000;
  std::uint64_t ens_seed = 1;
  ensemble->add_option("--family", ens_fam.kind, "family kind");
  ensemble->add_option("--base", ens_fam.base, "base kind");
  ensemble->add_option("--block", ens_fam.block, "block length");
  ensemble->add_option("--pin", ens_fam.pin, "pinned detector (1-based)");
  ensemble->add_option("--offset", ens_fam.offset, "fixed cyclic offset");
  ensemble->add_option("--alphabet", ens_alphabet, "comma-separated values");
  ensemble->add_option("--weights", ens_weights, "comma-separated weights");
  ensemble->add_option("--n", ens_n, "comma-separated detector counts");
  ensemble->add_option("--r", ens_r, "round length (0 = sqrt schedule)");
  ensemble->add_option("--replicates", ens_reps, "configuration replicates");
  ensemble->add_option("--k", ens_k, "variance-bound order");
  ensemble->add_option("--seed", ens_seed, "rng seed");
  std::string ens_out;
  ensemble->add_option("--out", ens_out,
                       "directory for ensemble.csv and bounds.json");

  // run
  auto* run = app.add_subcommand("run", "full experiment from a config file");
  std::string run_config, run_out = "out";
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  run->add_option("config", run_config, "experiment config (JSON)")->required();
  run->add_option("--out", run_out, "output directory");
  run->add_option("--seed", run_seed, "master seed override")
      ->each([&](const std::string&) { run_seed_set = true; });

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  bool verify_fast = false;
  std::uint64_t verify_seed = 20240801;
  verify->add_flag("--fast", verify_fast, "skip the large statistical checks");
  verify->add_option("--seed", verify_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (exact->parsed())
      return cmd_exact(scheme_file, config_file, demo, exact_format, exact_out);
    if (simulate->parsed())
      return cmd_simulate(sim_scheme, sim_config, sim_demo, sim_seed, sim_reps,
                          sim_format, sim_out);
    if (stats->parsed())
      return cmd_scheme_stats(stats_fam, stats_n, stats_r, stats_k,
                              stats_method, stats_samples, stats_seed,
                              stats_format, stats_out);
    if (ensemble->parsed())
      return cmd_ensemble(ens_fam, ens_alphabet, ens_weights, ens_n, ens_r,
                          ens_reps, ens_k, ens_seed, ens_out);
    if (run->parsed())
      return cmd_run(run_config, run_out,
                     run_seed_set ? std::optional<std::uint64_t>(run_seed)
                                  : std::nullopt);
    if (verify->parsed()) return cmd_verify(verify_fast, verify_seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << '\n';
    // Missing/unreadable inputs and malformed configs are usage errors.
    return what.find("not found") != std::string::npos ||
                   what.find("config:") != std::string::npos
               ? 2
               : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
