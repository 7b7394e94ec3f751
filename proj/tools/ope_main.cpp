// Command-line front end: generate datasets, evaluate them, compute ground
// truth, and run full experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ope/dataset_io.hpp"
#include "ope/estimators.hpp"
#include "ope/experiment.hpp"
#include "ope/oracle.hpp"
#include "ope/registry.hpp"
#include "ope/sampling.hpp"
#include "ope/types.hpp"

namespace {

using nlohmann::json;

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

// Inline JSON if it looks like an object, otherwise a path to a JSON file.
json json_arg(const std::string& text, const char* what) {
  try {
    if (!text.empty() && text.front() == '{') return json::parse(text);
    std::ifstream in(text);
    if (!in) throw ope::ConfigError(std::string("cannot open ") + what + " file " + text);
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ope::ConfigError(std::string("bad ") + what + " JSON: " + e.what());
  }
}

void write_json(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot open " + out + " for writing");
  file << j.dump(2) << '\n';
}

json report_json(const ope::EstimateReport& r) {
  json j = {{"estimator", ope::to_string(r.estimator)},
            {"estimate", r.estimate},
            {"n", r.n},
            {"effective_sample_size", r.diagnostics.effective_sample_size},
            {"max_weight", r.diagnostics.max_weight}};
  if (!r.diagnostics.chosen_suffix_lengths.empty()) {
    j["chosen_suffix_lengths"] = r.diagnostics.chosen_suffix_lengths;
  }
  return j;
}

struct Options {
  std::string env;
  std::string policy;
  std::string data;
  std::string config;
  std::string out;
  std::string method = "exact";
  std::vector<std::string> estimators;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::uint64_t episodes = 1'000'000;
  int parallelism = 1;
};

int generate(const Options& o) {
  const json env_spec = json_arg(o.env, "environment");
  const json policy_spec = json_arg(o.policy, "policy");
  const auto env = ope::make_environment(env_spec);
  const auto policy = ope::make_policy(env, policy_spec);
  const std::uint64_t seed = o.seed.value_or(0);
  const ope::DatasetMetadata meta{env.spec.dump(), policy_spec.dump(), seed};
  const std::string out = o.out.empty() ? "-" : o.out;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        auto write = [&](const auto& data) {
          if (out == "-") {
            ope::write_dataset(std::cout, data);
          } else {
            ope::write_dataset(out, data);
          }
        };
        if constexpr (std::is_same_v<P, ope::PrimitivePolicy>) {
          auto data = ope::generate_dataset(env.mdp, p, o.n, seed, o.parallelism);
          data.metadata = meta;
          write(data);
        } else {
          auto data = ope::generate_options_dataset(env.mdp, p, o.n, seed, o.parallelism);
          data.metadata = meta;
          write(data);
        }
      },
      policy);
  return 0;
}

int evaluate(const Options& o) {
  const auto any = ope::read_dataset(o.data);
  const auto& meta = std::visit([](const auto& d) -> const ope::DatasetMetadata& { return d.metadata; }, any);
  if (meta.environment.empty()) throw ope::ConfigError("dataset header names no environment");
  const auto env = ope::make_environment(json::parse(meta.environment));
  const auto evaluation = ope::make_policy(env, json_arg(o.policy, "policy"));

  std::vector<ope::Estimator> estimators;
  if (o.estimators.empty() || (o.estimators.size() == 1 && o.estimators[0] == "all")) {
    for (auto e : ope::all_estimators()) estimators.push_back(e);
  } else {
    for (const auto& id : o.estimators) estimators.push_back(ope::parse_estimator(id));
  }

  json reports = json::array();
  if (const auto* data = std::get_if<ope::Dataset>(&any)) {
    const auto* eval = std::get_if<ope::PrimitivePolicy>(&evaluation);
    if (!eval) throw ope::ConfigError("primitive dataset needs a primitive evaluation policy");
    const auto weighted = ope::weigh(*data, *eval);
    for (auto e : estimators) {
      switch (e) {
        case ope::Estimator::is: reports.push_back(report_json(ope::is_estimate(weighted))); break;
        case ope::Estimator::pdis: reports.push_back(report_json(ope::pdis_estimate(weighted))); break;
        case ope::Estimator::wis: reports.push_back(report_json(ope::wis_estimate(weighted))); break;
        case ope::Estimator::cwpdis: reports.push_back(report_json(ope::cwpdis_estimate(weighted))); break;
        case ope::Estimator::incris: reports.push_back(report_json(ope::incris_estimate(weighted))); break;
        case ope::Estimator::partitioned_pdis:
          if (!env.cut) throw ope::ConfigError(env.id + " defines no partition");
          reports.push_back(report_json(ope::partitioned_pdis_estimate(*data, *eval, env.cut)));
          break;
        case ope::Estimator::options_pdis:
          if (o.estimators.empty() || o.estimators[0] == "all") break;
          throw ope::ConfigError("options_pdis needs an options dataset");
      }
    }
  } else {
    const auto& options = std::get<ope::OptionsDataset>(any);
    const auto* eval = std::get_if<ope::OptionsPolicy>(&evaluation);
    if (!eval) throw ope::ConfigError("options dataset needs an options evaluation policy");
    const auto behavior = ope::make_policy(env, json::parse(meta.behavior_policy));
    const auto changed = ope::changed_options(std::get<ope::OptionsPolicy>(behavior), *eval);
    const auto weighted = ope::weigh(options, *eval, changed);
    for (auto e : estimators) {
      switch (e) {
        case ope::Estimator::is: reports.push_back(report_json(ope::is_estimate(weighted))); break;
        case ope::Estimator::pdis: reports.push_back(report_json(ope::pdis_estimate(weighted))); break;
        case ope::Estimator::wis: reports.push_back(report_json(ope::wis_estimate(weighted))); break;
        case ope::Estimator::cwpdis: reports.push_back(report_json(ope::cwpdis_estimate(weighted))); break;
        case ope::Estimator::incris: reports.push_back(report_json(ope::incris_estimate(weighted))); break;
        case ope::Estimator::options_pdis:
          reports.push_back(report_json(ope::options_pdis_estimate(options, *eval, changed)));
          break;
        case ope::Estimator::partitioned_pdis: {
          if (!env.cut) throw ope::ConfigError(env.id + " defines no partition");
          std::vector<std::size_t> cuts;
          for (const auto& t : options.trajectories) cuts.push_back(env.cut(ope::flatten(t)));
          reports.push_back(report_json(ope::partitioned_pdis_estimate(weighted, cuts)));
          break;
        }
      }
    }
  }
  write_json({{"environment", env.spec}, {"reports", reports}}, o.out);
  return 0;
}

int oracle(const Options& o) {
  const auto env = ope::make_environment(json_arg(o.env, "environment"));
  const auto policy = ope::make_policy(env, json_arg(o.policy, "policy"));
  if (o.method != "exact" && o.method != "monte_carlo") {
    throw ope::ConfigError("--method must be exact or monte_carlo");
  }
  const auto value = std::visit(
      [&](const auto& p) {
        if (o.method == "exact") return ope::exact_value(env.mdp, p);
        return ope::monte_carlo_value(env.mdp, p, o.episodes, o.seed.value_or(0), o.parallelism);
      },
      policy);
  json j = {{"environment", env.spec},
            {"value", value.value},
            {"method", ope::to_string(value.method)},
            {"standard_error", value.standard_error}};
  if (value.method == ope::ValueMethod::monte_carlo) {
    j["episodes"] = o.episodes;
    j["seed"] = o.seed.value_or(0);
  }
  write_json(j, o.out);
  return 0;
}

int experiment(const Options& o) {
  auto config = ope::load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.trials) {
    if (*o.trials < 1) throw ope::ConfigError("--trials must be >= 1");
    config.trials = *o.trials;
  }
  if (!o.out.empty()) config.output = o.out;
  if (config.output.empty()) throw ope::ConfigError("no output path (config output or --out)");
  const auto result = ope::run_experiment(config, o.parallelism);
  ope::emit_experiment(config, result, config.output);
  if (config.trials >= 2) {
    for (const auto& s : ope::mse_summary(result.rows)) {
      std::cerr << s.series << ' ' << s.estimator << " n=" << s.n << " mse=" << s.mse << " +- "
                << s.half_width << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-policy evaluation of tabular MDPs with importance sampling"};
  app.set_version_flag("--version", std::string(ope::version()));
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Sample a dataset from a behavior policy (JSONL)");
  gen->add_option("--env", o.env, "Environment spec: inline JSON or file")->required();
  gen->add_option("--policy", o.policy, "Behavior policy spec: inline JSON or file")->required();
  gen->add_option("--n", o.n, "Number of trajectories")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Master seed");
  gen->add_option("--out", o.out, "Output path (default stdout)");
  gen->add_option("--parallelism", o.parallelism, "Worker threads")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("evaluate", "Run estimators on a dataset (JSON report)");
  eval->add_option("--data", o.data, "Dataset produced by generate")->required();
  eval->add_option("--policy", o.policy, "Evaluation policy spec: inline JSON or file")->required();
  eval->add_option("--estimator", o.estimators, "Estimator id, repeatable, or 'all'");
  eval->add_option("--out", o.out, "Output path (default stdout)");

  auto* orc = app.add_subcommand("oracle", "Value of a policy (JSON)");
  orc->add_option("--env", o.env, "Environment spec: inline JSON or file")->required();
  orc->add_option("--policy", o.policy, "Policy spec: inline JSON or file")->required();
  orc->add_option("--method", o.method, "exact or monte_carlo");
  orc->add_option("--episodes", o.episodes, "Monte Carlo episodes");
  orc->add_option("--seed", o.seed, "Monte Carlo seed");
  orc->add_option("--out", o.out, "Output path (default stdout)");
  orc->add_option("--parallelism", o.parallelism, "Worker threads")->check(CLI::PositiveNumber);

  auto* exp = app.add_subcommand("experiment", "Run an experiment config (CSV + sidecar)");
  exp->add_option("--config", o.config, "Experiment config JSON")->required();
  exp->add_option("--seed", o.seed, "Override the master seed");
  exp->add_option("--trials", o.trials, "Override the trial count");
  exp->add_option("--out", o.out, "Override the output CSV path");
  exp->add_option("--parallelism", o.parallelism, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*gen) return generate(o);
    if (*eval) return evaluate(o);
    if (*orc) return oracle(o);
    return experiment(o);
  } catch (const ope::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ope::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
