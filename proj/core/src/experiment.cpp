#include "ope/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ope/estimators.hpp"
#include "ope/oracle.hpp"
#include "ope/random.hpp"
#include "ope/registry.hpp"
#include "ope/sampling.hpp"
#include "ope/statistics.hpp"
#include "ope/types.hpp"

#ifndef OPE_VERSION
#define OPE_VERSION "unknown"
#endif

namespace ope {
namespace {

using nlohmann::json;

constexpr const char* kRowHeader = "series,estimator,env,n,trial,estimate,truth,squared_error";

std::string format_double(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("experiment config: missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("experiment config: bad value for '") + key + "'");
  }
}

// A built series: policies, truth, and the options bookkeeping.
struct Series {
  std::string name;
  AnyPolicy behavior;
  AnyPolicy evaluation;
  std::set<OptionId> changed;
  SeriesTruth truth;
};

bool is_options(const AnyPolicy& p) { return std::holds_alternative<OptionsPolicy>(p); }

ValueResult value_of(const Environment& env, const AnyPolicy& policy, const TruthConfig& truth,
                     int parallelism) {
  return std::visit(
      [&](const auto& p) {
        if (truth.method == "exact") return exact_value(env.mdp, p);
        return monte_carlo_value(env.mdp, p, truth.episodes, truth.seed, parallelism);
      },
      policy);
}

// Estimates for one dataset, in the order of `estimators`.
std::vector<double> evaluate_all(const Environment& env, const Series& s,
                                 const std::vector<Estimator>& estimators, std::size_t n,
                                 std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(estimators.size());
  if (!is_options(s.behavior)) {
    const auto& behavior = std::get<PrimitivePolicy>(s.behavior);
    const auto& evaluation = std::get<PrimitivePolicy>(s.evaluation);
    const Dataset data = generate_dataset(env.mdp, behavior, n, seed);
    const WeightedData weighted = weigh(data, evaluation);
    for (Estimator e : estimators) {
      switch (e) {
        case Estimator::is: out.push_back(is_estimate(weighted).estimate); break;
        case Estimator::pdis: out.push_back(pdis_estimate(weighted).estimate); break;
        case Estimator::wis: out.push_back(wis_estimate(weighted).estimate); break;
        case Estimator::cwpdis: out.push_back(cwpdis_estimate(weighted).estimate); break;
        case Estimator::incris: out.push_back(incris_estimate(weighted).estimate); break;
        case Estimator::partitioned_pdis: {
          std::vector<std::size_t> cuts;
          cuts.reserve(n);
          for (const auto& t : data.trajectories) cuts.push_back(env.cut(t));
          out.push_back(partitioned_pdis_estimate(weighted, cuts).estimate);
          break;
        }
        case Estimator::options_pdis: throw ConfigError("options_pdis needs options policies");
      }
    }
    return out;
  }
  const auto& behavior = std::get<OptionsPolicy>(s.behavior);
  const auto& evaluation = std::get<OptionsPolicy>(s.evaluation);
  const OptionsDataset data = generate_options_dataset(env.mdp, behavior, n, seed);
  const WeightedData weighted = weigh(data, evaluation, s.changed);
  for (Estimator e : estimators) {
    switch (e) {
      case Estimator::is: out.push_back(is_estimate(weighted).estimate); break;
      case Estimator::pdis: out.push_back(pdis_estimate(weighted).estimate); break;
      case Estimator::wis: out.push_back(wis_estimate(weighted).estimate); break;
      case Estimator::cwpdis: out.push_back(cwpdis_estimate(weighted).estimate); break;
      case Estimator::incris: out.push_back(incris_estimate(weighted).estimate); break;
      case Estimator::options_pdis:
        out.push_back(options_pdis_estimate(data, evaluation, s.changed).estimate);
        break;
      case Estimator::partitioned_pdis: {
        std::vector<std::size_t> cuts;
        cuts.reserve(n);
        for (const auto& t : data.trajectories) cuts.push_back(env.cut(flatten(t)));
        out.push_back(partitioned_pdis_estimate(weighted, cuts).estimate);
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  return x;
}

}  // namespace

std::string_view version() { return OPE_VERSION; }

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  static const std::set<std::string> known = {"name",      "environment", "behavior", "evaluation",
                                              "series",    "estimators",  "n_grid",   "trials",
                                              "seed",      "output",      "truth"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("experiment config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  c.name = j.value("name", std::string{});
  c.environment = field<json>(j, "environment");
  if (j.contains("series")) {
    if (j.contains("behavior") || j.contains("evaluation")) {
      throw ConfigError("experiment config: give either series or behavior/evaluation");
    }
    for (const auto& s : field<json>(j, "series")) {
      c.series.push_back({field<std::string>(s, "name"), field<json>(s, "behavior"),
                          field<json>(s, "evaluation")});
    }
  } else {
    c.series.push_back({"main", field<json>(j, "behavior"), field<json>(j, "evaluation")});
  }
  if (c.series.empty()) throw ConfigError("experiment config: no series");
  std::set<std::string> names;
  for (const auto& s : c.series) {
    if (s.name.empty() || s.name.find_first_of(",\"\n") != std::string::npos) {
      throw ConfigError("experiment config: series names must be non-empty without , \" or newlines");
    }
    if (!names.insert(s.name).second) throw ConfigError("duplicate series '" + s.name + "'");
  }
  c.estimators = field<std::vector<std::string>>(j, "estimators");
  if (c.estimators.empty()) throw ConfigError("experiment config: no estimators");
  c.n_grid = field<std::vector<std::int64_t>>(j, "n_grid");
  if (c.n_grid.empty()) throw ConfigError("experiment config: empty n_grid");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] < 1 || (i > 0 && c.n_grid[i] <= c.n_grid[i - 1])) {
      throw ConfigError("experiment config: n_grid must be positive and strictly increasing");
    }
  }
  c.trials = j.contains("trials") ? field<int>(j, "trials") : 128;
  if (c.trials < 1) throw ConfigError("experiment config: trials must be >= 1");
  c.seed = field<std::uint64_t>(j, "seed");
  c.output = j.value("output", std::string{});
  if (j.contains("truth")) {
    const auto& t = j.at("truth");
    c.truth.method = t.value("method", c.truth.method);
    c.truth.episodes = t.value("episodes", c.truth.episodes);
    c.truth.seed = t.value("seed", c.truth.seed);
    if (c.truth.method != "exact" && c.truth.method != "monte_carlo") {
      throw ConfigError("truth.method must be exact or monte_carlo");
    }
    if (c.truth.episodes < 2) throw ConfigError("truth.episodes must be >= 2");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json series = json::array();
  for (const auto& s : c.series) {
    series.push_back({{"name", s.name}, {"behavior", s.behavior}, {"evaluation", s.evaluation}});
  }
  return {{"name", c.name},
          {"environment", c.environment},
          {"series", series},
          {"estimators", c.estimators},
          {"n_grid", c.n_grid},
          {"trials", c.trials},
          {"seed", c.seed},
          {"output", c.output},
          {"truth",
           {{"method", c.truth.method}, {"episodes", c.truth.episodes}, {"seed", c.truth.seed}}}};
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config).dump();
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016" PRIx64, fnv1a64(text));
  return buffer;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int parallelism) {
  // Validate everything before sampling.
  std::vector<Estimator> estimators;
  for (const auto& id : config.estimators) estimators.push_back(parse_estimator(id));
  const Environment env = make_environment(config.environment);

  std::vector<Series> series;
  for (const auto& sc : config.series) {
    Series s{sc.name, make_policy(env, sc.behavior), make_policy(env, sc.evaluation), {}, {}};
    if (is_options(s.behavior) != is_options(s.evaluation)) {
      throw ConfigError("series " + sc.name + ": behavior and evaluation must both be primitive or both options-based");
    }
    if (is_options(s.behavior)) {
      s.changed = changed_options(std::get<OptionsPolicy>(s.behavior),
                                  std::get<OptionsPolicy>(s.evaluation));
    }
    for (Estimator e : estimators) {
      if (e == Estimator::options_pdis && !is_options(s.behavior)) {
        throw ConfigError("series " + sc.name + ": options_pdis needs options policies");
      }
      if (e == Estimator::partitioned_pdis && !env.cut) {
        throw ConfigError("environment " + env.id + " defines no partition for partitioned_pdis");
      }
      if (e == Estimator::incris && config.n_grid.front() < 2) {
        throw ConfigError("incris needs n >= 2");
      }
    }
    series.push_back(std::move(s));
  }

  ExperimentResult result;
  for (auto& s : series) {
    const auto truth = value_of(env, s.evaluation, config.truth, parallelism);
    const auto behavior = value_of(env, s.behavior, config.truth, parallelism);
    s.truth = {s.name, truth.value, behavior.value, truth.standard_error};
    result.truths.push_back(s.truth);
  }

  // One task per (series, n, trial); each writes its own slot.
  const std::size_t grid = config.n_grid.size();
  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t tasks = series.size() * grid * trials;
  std::vector<std::vector<double>> estimates(tasks);
  parallel_for(tasks, parallelism, [&](std::size_t task) {
    const std::size_t trial = task % trials;
    const std::size_t g = (task / trials) % grid;
    const Series& s = series[task / (trials * grid)];
    const auto n = config.n_grid[g];
    const std::uint64_t seed = derive_seed(config.seed, fnv1a64(s.name),
                                           static_cast<std::uint64_t>(n), trial);
    estimates[task] = evaluate_all(env, s, estimators, static_cast<std::size_t>(n), seed);
  });

  result.rows.reserve(tasks * estimators.size());
  for (std::size_t si = 0; si < series.size(); ++si) {
    for (std::size_t e = 0; e < estimators.size(); ++e) {
      for (std::size_t g = 0; g < grid; ++g) {
        for (std::size_t trial = 0; trial < trials; ++trial) {
          const double estimate = estimates[(si * grid + g) * trials + trial][e];
          const double truth = series[si].truth.evaluation_value;
          result.rows.push_back({series[si].name, config.estimators[e], env.id, config.n_grid[g],
                                 static_cast<int>(trial), estimate, truth,
                                 (estimate - truth) * (estimate - truth)});
        }
      }
    }
  }
  return result;
}

std::vector<SummaryRow> mse_summary(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::size_t> index;
  std::vector<SummaryRow> summary;
  std::vector<std::vector<double>> errors;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.series, r.estimator, r.n);
    auto [it, inserted] = index.try_emplace(key, summary.size());
    if (inserted) {
      summary.push_back({r.series, r.estimator, r.n, 0, 0.0, 0.0});
      errors.emplace_back();
    }
    errors[it->second].push_back(r.squared_error);
  }
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const auto& e = errors[i];
    if (e.size() < 2) {
      throw std::invalid_argument("mse_summary: " + summary[i].estimator + " at n=" +
                                  std::to_string(summary[i].n) + " has fewer than 2 trials");
    }
    summary[i].trials = static_cast<int>(e.size());
    summary[i].mse = mean(e);
    summary[i].half_width = 1.96 * std::sqrt(sample_var(e) / static_cast<double>(e.size()));
  }
  return summary;
}

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kRowHeader << '\n';
  for (const auto& r : rows) {
    out << r.series << ',' << r.estimator << ',' << r.env << ',' << r.n << ',' << r.trial << ','
        << format_double(r.estimate) << ',' << format_double(r.truth) << ','
        << format_double(r.squared_error) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "series,estimator,n,trials,mse,ci_half_width\n";
  for (const auto& s : summary) {
    out << s.series << ',' << s.estimator << ',' << s.n << ',' << s.trials << ','
        << format_double(s.mse) << ',' << format_double(s.half_width) << '\n';
  }
}

std::vector<ResultRow> parse_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRowHeader) {
    throw std::invalid_argument("results CSV: unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 8) {
      throw std::invalid_argument("results CSV line " + std::to_string(line_number) +
                                  ": expected 8 fields");
    }
    try {
      rows.push_back({cells[0], cells[1], cells[2], std::stoll(cells[3]), std::stoi(cells[4]),
                      parse_double(cells[5]), parse_double(cells[6]), parse_double(cells[7])});
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("results CSV line " + std::to_string(line_number) + ": " +
                                  e.what());
    }
  }
  return rows;
}

void emit_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::string& path) {
  std::string stem = path;
  if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);

  auto open = [](const std::string& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + p + " for writing");
    return out;
  };
  {
    auto out = open(path);
    write_rows_csv(out, result.rows);
    if (!out) throw std::runtime_error("write to " + path + " failed");
  }
  if (config.trials >= 2) {
    auto out = open(stem + ".summary.csv");
    write_summary_csv(out, mse_summary(result.rows));
  }
  json truths = json::array();
  for (const auto& t : result.truths) {
    truths.push_back({{"series", t.series},
                      {"evaluation_value", t.evaluation_value},
                      {"behavior_value", t.behavior_value},
                      {"standard_error", t.standard_error}});
  }
  const json meta = {{"config_hash", config_hash(config)},
                     {"seed", config.seed},
                     {"version", version()},
                     {"config", to_json(config)},
                     {"truth", truths}};
  auto out = open(stem + ".meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace ope
