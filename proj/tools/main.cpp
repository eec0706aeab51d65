// gammaref: reproducible command-line front end for the ruin-probability
// toolkit. Every run writes its resolved configuration next to its results
// so any artifact directory can be reproduced bit-identically.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gammaref/field_analysis.hpp"
#include "gammaref/gauss_constants.hpp"
#include "gammaref/monte_carlo.hpp"
#include "gammaref/serialize.hpp"
#include "gammaref/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gammaref;

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  out << contents;
}

// Resolved configuration: defaults, overlaid by the JSON config file,
// overlaid by explicitly-passed flags. The resolved object is archived with
// the results; "timestamp" is informational and excluded from reproducibility
// comparisons.
struct ConfigBuilder {
  json cfg;

  explicit ConfigBuilder(json defaults) : cfg(std::move(defaults)) {}

  void merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json file_cfg;
    try {
      in >> file_cfg;
    } catch (const json::exception& e) {
      throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    for (auto& [key, value] : file_cfg.items()) {
      if (!cfg.contains(key))
        throw ConfigError("config file " + path + " has unknown key \"" + key + "\"");
      cfg[key] = value;
    }
  }

  template <typename T>
  void flag(const CLI::Option* opt, const std::string& key, const T& value) {
    if (opt->count() > 0) cfg[key] = value;
  }
};

HorizonScenario scenario_from(const json& cfg) {
  const std::string tag = cfg.at("scenario");
  if (tag == "short") {
    const double t = cfg.at("horizon");
    if (!(t > 0.0)) throw ConfigError("short scenario requires horizon > 0");
    return ShortHorizon{[t](double) { return t; }};
  }
  if (tag == "intermediate") return IntermediateHorizon{cfg.at("s0").get<double>()};
  if (tag == "long") {
    const json& x = cfg.at("x");
    if (x.is_string() && x.get<std::string>() == "inf")
      return LongHorizon{std::numeric_limits<double>::infinity()};
    return LongHorizon{x.get<double>()};
  }
  throw ConfigError("scenario must be one of short, intermediate, long; got \"" + tag + "\"");
}

ModelParams params_from(const json& cfg) {
  return ModelParams(HurstIndex(cfg.at("hurst").get<double>()), cfg.at("drift").get<double>(),
                     cfg.at("gamma").get<double>());
}

ExperimentSpec spec_from(const json& cfg) {
  ExperimentSpec spec{params_from(cfg),
                      cfg.at("u").get<double>(),
                      scenario_from(cfg),
                      GridSpec(cfg.at("grid_n").get<std::size_t>(), 1.0),
                      cfg.at("reps").get<std::size_t>(),
                      cfg.at("seed").get<std::uint64_t>()};
  spec.grid = GridSpec(spec.grid.n_steps, experiment_horizon(spec));
  return spec;
}

GaussConstants constants_from(const json& cfg) {
  GaussConstants constants;
  if (!cfg.at("pickands").is_null()) constants.pickands = cfg.at("pickands").get<double>();
  if (!cfg.at("piterbarg").is_null()) constants.piterbarg = cfg.at("piterbarg").get<double>();
  return constants;
}

void persist(const fs::path& out_dir, json cfg, const json& result, const std::string& csv) {
  fs::create_directories(out_dir);
  cfg["tool_version"] = GAMMAREF_VERSION;
  cfg["timestamp"] = iso_timestamp();
  write_file(out_dir / "config.json", cfg.dump(2) + "\n");
  write_file(out_dir / "result.json", result.dump(2) + "\n");
  write_file(out_dir / "result.csv", csv);
}

std::string conditional_csv(const ConditionalSample& sample) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "scaled_value\n";
  for (double v : sample.values) csv << v << '\n';
  return csv.str();
}

json experiment_defaults() {
  return json{{"hurst", 0.5},     {"drift", 1.0},      {"gamma", 0.0},
              {"u", 1.0},         {"scenario", "long"}, {"s0", 0.5},
              {"x", "inf"},       {"horizon", 1.0},     {"grid_n", 16384},
              {"reps", 10000},    {"seed", 1},          {"threads", 1},
              {"pickands", nullptr}, {"piterbarg", nullptr},
              {"u_ladder", json::array()}};
}

struct ExperimentArgs {
  std::string config_path, scenario, x_str, out_dir = "out";
  double hurst = 0, drift = 0, gamma = 0, u = 0, s0 = 0, horizon = 0;
  double pickands = 0, piterbarg = 0;
  std::size_t grid_n = 0, reps = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Shared flag set for the simulation-driven subcommands.
void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args,
                          std::vector<std::pair<const CLI::Option*, std::function<void(ConfigBuilder&)>>>& binds) {
  auto bind = [&](CLI::Option* opt, auto setter) {
    binds.emplace_back(opt, [opt, setter](ConfigBuilder& b) {
      if (opt->count() > 0) setter(b.cfg);
    });
  };
  cmd->add_option("--config", args.config_path, "JSON config file; flags win over it");
  bind(cmd->add_option("--hurst", args.hurst), [&args](json& c) { c["hurst"] = args.hurst; });
  bind(cmd->add_option("--drift", args.drift), [&args](json& c) { c["drift"] = args.drift; });
  bind(cmd->add_option("--gamma", args.gamma), [&args](json& c) { c["gamma"] = args.gamma; });
  bind(cmd->add_option("--u", args.u), [&args](json& c) { c["u"] = args.u; });
  bind(cmd->add_option("--scenario", args.scenario),
       [&args](json& c) { c["scenario"] = args.scenario; });
  bind(cmd->add_option("--s0", args.s0), [&args](json& c) { c["s0"] = args.s0; });
  bind(cmd->add_option("--x", args.x_str), [&args](json& c) {
    if (args.x_str == "inf")
      c["x"] = "inf";
    else
      c["x"] = std::stod(args.x_str);
  });
  bind(cmd->add_option("--horizon", args.horizon),
       [&args](json& c) { c["horizon"] = args.horizon; });
  bind(cmd->add_option("--grid-n", args.grid_n), [&args](json& c) { c["grid_n"] = args.grid_n; });
  bind(cmd->add_option("--reps", args.reps), [&args](json& c) { c["reps"] = args.reps; });
  bind(cmd->add_option("--seed", args.seed), [&args](json& c) { c["seed"] = args.seed; });
  bind(cmd->add_option("--threads", args.threads),
       [&args](json& c) { c["threads"] = args.threads; });
  bind(cmd->add_option("--pickands", args.pickands),
       [&args](json& c) { c["pickands"] = args.pickands; });
  bind(cmd->add_option("--piterbarg", args.piterbarg),
       [&args](json& c) { c["piterbarg"] = args.piterbarg; });
  cmd->add_option("--out", args.out_dir, "artifact directory");
}

json resolve_experiment(const ExperimentArgs& args,
                        const std::vector<std::pair<const CLI::Option*, std::function<void(ConfigBuilder&)>>>& binds) {
  ConfigBuilder builder(experiment_defaults());
  if (!args.config_path.empty()) builder.merge_file(args.config_path);
  for (const auto& [opt, apply] : binds) apply(builder);
  return builder.cfg;
}

int run_ruin_prob(const json& cfg, const fs::path& out_dir) {
  const ExperimentSpec spec = spec_from(cfg);
  const unsigned threads = cfg.at("threads").get<unsigned>();
  const McEstimate mc = estimate_ruin_prob(spec, threads);

  json result = mc;
  result["realized_horizon"] = spec.grid.horizon;
  result["grid_n"] = spec.grid.n_steps;
  try {
    const AsymptoticEstimate asym =
        psi_gamma(spec.params, spec.u, spec.scenario, constants_from(cfg));
    result["asymptotic"] = asym;
  } catch (const ConfigError&) {
    // Asymptotic comparison is optional here: it needs constants the user
    // may not have supplied (H < 1/2).
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "point,ci_low,ci_high,n,n_hits\n"
      << mc.point << ',' << mc.ci_low << ',' << mc.ci_high << ',' << mc.n << ',' << mc.n_hits
      << '\n';
  persist(out_dir, cfg, result, csv.str());
  return 0;
}

int run_conditional(const json& cfg, const fs::path& out_dir, bool losses) {
  const ExperimentSpec spec = spec_from(cfg);
  const unsigned threads = cfg.at("threads").get<unsigned>();
  const ConditionalSample sample = losses ? sample_conditional_losses(spec, threads)
                                          : sample_conditional_ruin_times(spec, threads);
  json result = sample;
  if (sample.values.size() >= 50) result["ks_statistic"] = ks_statistic(sample);
  persist(out_dir, cfg, result, conditional_csv(sample));
  return 0;
}

int run_constants(const json& cfg, const fs::path& out_dir) {
  const std::string kind = cfg.at("kind");
  const double alpha = cfg.at("alpha");
  const double s = cfg.at("S");
  const double step = cfg.at("step");
  const auto reps = cfg.at("reps").get<std::size_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto threads = cfg.at("threads").get<unsigned>();

  ConstantEstimate est;
  if (kind == "pickands") {
    est = pickands_estimate(alpha, s, step, reps, seed, threads);
  } else if (kind == "piterbarg") {
    est = piterbarg_estimate(alpha, cfg.at("b").get<double>(), s, step, reps, seed, threads);
  } else if (kind == "tilde-piterbarg") {
    est = tilde_piterbarg_estimate(alpha, cfg.at("b").get<double>(), s, step, reps, seed,
                                   threads);
  } else {
    throw ConfigError("kind must be pickands, piterbarg, or tilde-piterbarg; got \"" + kind +
                      "\"");
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "kind,alpha,b,S,grid_step,replications,value,std_error\n"
      << kind_name(est.kind) << ',' << est.alpha << ',' << (est.b ? *est.b : 0.0) << ','
      << est.truncation_s << ',' << est.grid_step << ',' << est.replications << ','
      << est.value << ',' << est.std_error << '\n';
  persist(out_dir, cfg, json(est), csv.str());
  return 0;
}

int run_field(const json& cfg, const fs::path& out_dir) {
  const FieldParams fp{params_from(cfg), cfg.at("d").get<double>()};
  const auto resolution = cfg.at("resolution").get<std::size_t>();

  json result;
  result["variance_max"] = [&] {
    const VarianceMax vm = locate_variance_max(fp, resolution);
    return json{{"s", vm.s}, {"t", vm.t}, {"V", vm.value}};
  }();
  if (fp.d > 0.0) {
    const ExpansionResiduals er = expansion_residuals(fp, cfg.at("radius").get<double>());
    result["expansion_residuals"] = {{"radii", er.radii},
                                     {"variance_ratio", er.variance_ratio},
                                     {"correlation_ratio", er.correlation_ratio},
                                     {"pass", er.pass}};
  }
  if (cfg.at("sweep").get<bool>()) {
    const std::vector<double> hs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const std::vector<double> gs{0.05, 0.25, 0.5, 0.75, 0.95};
    const std::vector<double> fracs{0.1, 0.5, 0.9, 0.99};
    result["negativity_sweep"] = certify_lemma_negativity(hs, gs, fracs, 1000);
  }

  std::ostringstream csv;
  write_landscape_csv(fp, resolution, csv);
  persist(out_dir, cfg, result, csv.str());
  return 0;
}

int run_compare(const json& cfg, const fs::path& out_dir) {
  ExperimentSpec base = spec_from(cfg);
  const unsigned threads = cfg.at("threads").get<unsigned>();
  const auto u_ladder = cfg.at("u_ladder").get<std::vector<double>>();
  if (u_ladder.empty()) throw ConfigError("u_ladder must not be empty");

  const ComparisonReport report =
      compare_mc_vs_asymptotic(base, u_ladder, constants_from(cfg), threads);

  std::ostringstream csv;
  csv.precision(17);
  csv << "u,mc_point,ci_low,ci_high,asymptotic,ratio\n";
  for (const auto& row : report.rows)
    csv << row.u << ',' << row.mc_point << ',' << row.ci_low << ',' << row.ci_high << ','
        << row.asymptotic << ',' << row.ratio << '\n';
  persist(out_dir, cfg, json(report), csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamma-reflected fBm ruin toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GAMMAREF_VERSION);

  ExperimentArgs exp_args;
  std::vector<std::pair<const CLI::Option*, std::function<void(ConfigBuilder&)>>> binds;

  auto* ruin_prob = app.add_subcommand("ruin-prob", "Monte Carlo ruin probability");
  auto* ruin_time = app.add_subcommand("ruin-time", "scaled conditional ruin times");
  auto* losses = app.add_subcommand("losses", "scaled conditional maximum losses");
  for (auto* cmd : {ruin_prob, ruin_time, losses}) add_experiment_flags(cmd, exp_args, binds);

  auto* constants = app.add_subcommand("constants", "Pickands/Piterbarg constant estimation");
  struct {
    std::string config_path, kind, out_dir = "out";
    double alpha = 0, b = 0, s = 0, step = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
  } const_args;
  std::vector<std::pair<const CLI::Option*, std::function<void(ConfigBuilder&)>>> const_binds;
  {
    auto bind = [&](CLI::Option* opt, auto setter) {
      const_binds.emplace_back(opt, [opt, setter](ConfigBuilder& b) {
        if (opt->count() > 0) setter(b.cfg);
      });
    };
    constants->add_option("--config", const_args.config_path, "JSON config file");
    bind(constants->add_option("--kind", const_args.kind),
         [&](json& c) { c["kind"] = const_args.kind; });
    bind(constants->add_option("--alpha", const_args.alpha),
         [&](json& c) { c["alpha"] = const_args.alpha; });
    bind(constants->add_option("--b", const_args.b), [&](json& c) { c["b"] = const_args.b; });
    bind(constants->add_option("--S", const_args.s), [&](json& c) { c["S"] = const_args.s; });
    bind(constants->add_option("--step", const_args.step),
         [&](json& c) { c["step"] = const_args.step; });
    bind(constants->add_option("--reps", const_args.reps),
         [&](json& c) { c["reps"] = const_args.reps; });
    bind(constants->add_option("--seed", const_args.seed),
         [&](json& c) { c["seed"] = const_args.seed; });
    bind(constants->add_option("--threads", const_args.threads),
         [&](json& c) { c["threads"] = const_args.threads; });
    constants->add_option("--out", const_args.out_dir, "artifact directory");
  }

  auto* field = app.add_subcommand("field", "variance-landscape certification");
  struct {
    std::string config_path, out_dir = "out";
    double hurst = 0, gamma = 0, d = 0, radius = 0;
    std::size_t resolution = 0;
    bool sweep = false;
  } field_args;
  std::vector<std::pair<const CLI::Option*, std::function<void(ConfigBuilder&)>>> field_binds;
  {
    auto bind = [&](CLI::Option* opt, auto setter) {
      field_binds.emplace_back(opt, [opt, setter](ConfigBuilder& b) {
        if (opt->count() > 0) setter(b.cfg);
      });
    };
    field->add_option("--config", field_args.config_path, "JSON config file");
    bind(field->add_option("--hurst", field_args.hurst),
         [&](json& c) { c["hurst"] = field_args.hurst; });
    bind(field->add_option("--gamma", field_args.gamma),
         [&](json& c) { c["gamma"] = field_args.gamma; });
    bind(field->add_option("--d", field_args.d), [&](json& c) { c["d"] = field_args.d; });
    bind(field->add_option("--radius", field_args.radius),
         [&](json& c) { c["radius"] = field_args.radius; });
    bind(field->add_option("--resolution", field_args.resolution),
         [&](json& c) { c["resolution"] = field_args.resolution; });
    bind(field->add_flag("--sweep", field_args.sweep),
         [&](json& c) { c["sweep"] = field_args.sweep; });
    field->add_option("--out", field_args.out_dir, "artifact directory");
  }

  auto* compare = app.add_subcommand("compare", "MC vs asymptotic over a u-ladder");
  std::vector<double> ladder;
  add_experiment_flags(compare, exp_args, binds);
  auto* ladder_opt = compare->add_option("--u-ladder", ladder, "comma-separated u values")
                         ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ruin_prob)
      return run_ruin_prob(resolve_experiment(exp_args, binds), exp_args.out_dir);
    if (*ruin_time)
      return run_conditional(resolve_experiment(exp_args, binds), exp_args.out_dir, false);
    if (*losses)
      return run_conditional(resolve_experiment(exp_args, binds), exp_args.out_dir, true);
    if (*constants) {
      ConfigBuilder builder(json{{"kind", "pickands"},
                                 {"alpha", 1.0},
                                 {"b", 1.0},
                                 {"S", 5.0},
                                 {"step", 0.02},
                                 {"reps", 10000},
                                 {"seed", 1},
                                 {"threads", 1}});
      if (!const_args.config_path.empty()) builder.merge_file(const_args.config_path);
      for (const auto& [opt, apply] : const_binds) apply(builder);
      return run_constants(builder.cfg, const_args.out_dir);
    }
    if (*field) {
      ConfigBuilder builder(json{{"hurst", 0.7},
                                 {"drift", 1.0},
                                 {"gamma", 0.3},
                                 {"d", 0.5},
                                 {"radius", 0.1},
                                 {"resolution", 200},
                                 {"sweep", false}});
      if (!field_args.config_path.empty()) builder.merge_file(field_args.config_path);
      for (const auto& [opt, apply] : field_binds) apply(builder);
      return run_field(builder.cfg, field_args.out_dir);
    }
    if (*compare) {
      json cfg = resolve_experiment(exp_args, binds);
      if (ladder_opt->count() > 0) cfg["u_ladder"] = ladder;
      return run_compare(cfg, exp_args.out_dir);
    }
  } catch (const InfeasibleRareEvent& e) {
    std::cerr << "infeasible: " << e.what()
              << " (implied upper bound " << e.implied_upper_bound << ")\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
