#include "detcap/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "detcap/parallel.hpp"

namespace detcap {

using ordered_json = nlohmann::ordered_json;

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

SchemeKind parse_kind(const std::string& s) {
  if (s == "uniform_injective") return SchemeKind::UniformInjective;
  if (s == "iid_uniform") return SchemeKind::IidUniform;
  if (s == "round_robin") return SchemeKind::RoundRobin;
  if (s == "block_repeat") return SchemeKind::BlockRepeat;
  if (s == "hot_start") return SchemeKind::HotStart;
  if (s == "fixed") return SchemeKind::Fixed;
  throw std::runtime_error("config: unknown family kind '" + s + "'");
}

FamilySpec parse_family(const ordered_json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::runtime_error("config: family needs a 'kind' string");
  FamilySpec spec;
  spec.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("base"))
    spec.base_kind = parse_kind(j.at("base").get<std::string>());
  if (j.contains("block")) spec.block = j.at("block").get<int>();
  if (j.contains("pin")) spec.pinned = j.at("pin").get<int>() - 1;  // 1-based
  if (j.contains("allow_padding"))
    spec.allow_padding = j.at("allow_padding").get<bool>();
  if (j.contains("offset")) spec.offset = j.at("offset").get<int>();
  if (spec.kind == SchemeKind::BlockRepeat && spec.block < 1)
    throw std::runtime_error("config: block_repeat needs block >= 1");
  if (spec.kind == SchemeKind::HotStart && spec.pinned < 0)
    throw std::runtime_error("config: hot_start pin is 1-based");
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: JSON parse error: ") +
                             e.what());
  }

  ExperimentConfig cfg;
  if (!j.contains("alphabet") || !j.at("alphabet").contains("values"))
    throw std::runtime_error("config: missing alphabet.values");
  cfg.alphabet_values =
      j.at("alphabet").at("values").get<std::vector<double>>();
  if (j.at("alphabet").contains("weights"))
    cfg.alphabet_weights =
        j.at("alphabet").at("weights").get<std::vector<double>>();

  if (j.contains("families")) {
    for (const auto& f : j.at("families")) cfg.families.push_back(parse_family(f));
  } else if (j.contains("family")) {
    const auto& f = j.at("family");
    if (f.is_array())
      for (const auto& one : f) cfg.families.push_back(parse_family(one));
    else
      cfg.families.push_back(parse_family(f));
  } else {
    throw std::runtime_error("config: missing family section");
  }

  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    const std::string rule = s.value("rule", "sqrt");
    if (rule == "sqrt") {
      cfg.schedule.rule = RoundSchedule::Rule::Sqrt;
    } else if (rule == "log") {
      cfg.schedule.rule = RoundSchedule::Rule::Log;
      cfg.schedule.log_c = s.value("c", 2.0);
    } else if (rule == "fixed") {
      cfg.schedule.rule = RoundSchedule::Rule::Fixed;
      if (!s.contains("r"))
        throw std::runtime_error("config: fixed schedule needs 'r'");
      cfg.schedule.fixed_r = s.at("r").get<int>();
    } else {
      throw std::runtime_error("config: unknown schedule rule '" + rule + "'");
    }
  }

  if (!j.contains("grid") || !j.at("grid").contains("n"))
    throw std::runtime_error("config: missing grid.n");
  cfg.n_grid = j.at("grid").at("n").get<std::vector<int>>();
  if (cfg.n_grid.empty()) throw std::runtime_error("config: empty n grid");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) throw std::runtime_error("config: grid n must be >= 1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1])
      throw std::runtime_error("config: grid n must be strictly ascending");
  }

  if (j.contains("target")) {
    const auto& t = j.at("target");
    cfg.epsilon = t.value("epsilon", 0.05);
    cfg.delta = t.value("delta", 0.05);
    if (t.contains("s") && !t.at("s").is_string())
      cfg.target_s = t.at("s").get<double>();
  }

  cfg.replicates = j.value("replicates", static_cast<std::int64_t>(10000));
  if (cfg.replicates < 2)
    throw std::runtime_error("config: replicates must be >= 2");
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(1));

  if (j.contains("converse_fractions"))
    cfg.sweep.converse_fractions =
        j.at("converse_fractions").get<std::vector<double>>();

  // Validate the alphabet eagerly so errors surface at parse time.
  (void)cfg.make_alphabet();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

namespace {

ordered_json point_to_json(const CapacityVerdict::Point& pt) {
  ordered_json p;
  p["n"] = pt.n;
  p["r"] = pt.r;
  p["replicates"] = pt.replicates;
  p["mean_T"] = pt.mean_t;
  p["se_mean"] = pt.se_mean;
  p["var_T"] = pt.var_t;
  p["se_var"] = pt.se_var;
  p["mean_S"] = pt.mean_s;
  p["b_mass"] = pt.mass;
  p["se_mass"] = pt.se_mass;
  if (pt.exact_mean_t) p["exact_mean_T"] = *pt.exact_mean_t;
  p["gap"] = pt.gap;
  p["var_floor"] = pt.var_floor;
  p["a_k"] = pt.a_k;
  p["b_k"] = pt.b_k;
  return p;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::string& out_dir,
                            std::optional<std::uint64_t> seed_override) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();

  const std::uint64_t seed = seed_override.value_or(config.seed);
  const ConfigAlphabet alphabet = config.make_alphabet();

  AchievabilityTarget target;
  target.s = config.target_s.value_or(1.0 / alphabet.p_average());
  target.epsilon = config.epsilon;
  target.delta = config.delta;
  target.validate();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("run: cannot create output directory " + out_dir);

  RunArtifacts artifacts;
  for (std::size_t fi = 0; fi < config.families.size(); ++fi) {
    const std::uint64_t family_seed =
        mix64(seed ^ (static_cast<std::uint64_t>(fi) * 7919ULL + 3ULL));
    artifacts.verdicts.push_back(capacity_sweep(
        config.families[fi], alphabet, config.n_grid, config.schedule, target,
        config.replicates, family_seed, config.sweep));
  }

  // sweep.csv: all families in config order, n ascending within each.
  const fs::path sweep_path = fs::path(out_dir) / "sweep.csv";
  {
    std::ofstream csv(sweep_path, std::ios::binary);
    if (!csv) throw std::runtime_error("run: cannot write sweep.csv");
    csv << "n,r,mean_T,se_mean,var_T,se_var,mean_S,b_mass,se_mass\n";
    for (const auto& verdict : artifacts.verdicts) {
      for (const auto& pt : verdict.points) {
        csv << pt.n << ',' << pt.r << ',' << format_csv_double(pt.mean_t)
            << ',' << format_csv_double(pt.se_mean) << ','
            << format_csv_double(pt.var_t) << ','
            << format_csv_double(pt.se_var) << ','
            << format_csv_double(pt.mean_s) << ','
            << format_csv_double(pt.mass) << ','
            << format_csv_double(pt.se_mass) << '\n';
      }
    }
  }

  const fs::path verdict_path = fs::path(out_dir) / "verdict.json";
  {
    ordered_json out;
    out["capacity_time"] = 1.0 / alphabet.p_average();
    out["target"] = {{"s", target.s},
                     {"epsilon", target.epsilon},
                     {"delta", target.delta}};
    ordered_json families = ordered_json::array();
    for (const auto& verdict : artifacts.verdicts) {
      ordered_json f;
      f["family"] = verdict.family_label;
      f["verdict"] = to_string(verdict.verdict);
      f["predicted"] = to_string(verdict.predicted);
      f["matches_prediction"] = verdict.matches_prediction;
      ordered_json points = ordered_json::array();
      for (const auto& pt : verdict.points) points.push_back(point_to_json(pt));
      f["points"] = std::move(points);
      ordered_json converse = ordered_json::array();
      for (const auto& probe : verdict.converse) {
        converse.push_back(
            {{"s_fraction", probe.s_fraction}, {"mass", probe.mass}});
      }
      f["converse"] = std::move(converse);
      families.push_back(std::move(f));
    }
    out["families"] = std::move(families);
    std::ofstream jf(verdict_path, std::ios::binary);
    if (!jf) throw std::runtime_error("run: cannot write verdict.json");
    jf << out.dump(2) << '\n';
  }

  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    ordered_json m;
    m["tool"] = "detcap";
    m["version"] = kDetcapVersion;
    m["seed"] = seed;
    ordered_json fams = ordered_json::array();
    for (const auto& f : config.families) fams.push_back(f.label());
    m["families"] = std::move(fams);
    m["n_grid"] = config.n_grid;
    m["replicates"] = config.replicates;
    m["thread_cap"] = worker_count();
    m["partitioning"] =
        "per-replicate derived rng streams; fixed-order pairwise reduction";
    m["wall_clock_seconds"] = wall;
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::runtime_error("run: cannot write manifest.json");
    mf << m.dump(2) << '\n';
  }

  artifacts.sweep_csv_path = sweep_path.string();
  artifacts.verdict_json_path = verdict_path.string();
  artifacts.manifest_json_path = manifest_path.string();
  return artifacts;
}

}  // namespace detcap
