#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ope {

std::string_view version();

// One behavior/evaluation pair. Experiments comparing several pairs (e.g.
// option lengths) list one series each; a single pair may be given at the top
// level of the config instead.
struct SeriesConfig {
  std::string name;
  nlohmann::json behavior;
  nlohmann::json evaluation;

  bool operator==(const SeriesConfig&) const = default;
};

// Ground truth for the evaluation policy: exact dynamic programming by
// default, or a seed-pinned Monte Carlo average.
struct TruthConfig {
  std::string method = "exact";
  std::uint64_t episodes = 1'000'000;
  std::uint64_t seed = 0;

  bool operator==(const TruthConfig&) const = default;
};

struct ExperimentConfig {
  std::string name;
  nlohmann::json environment;
  std::vector<SeriesConfig> series;
  std::vector<std::string> estimators;
  std::vector<std::int64_t> n_grid;
  int trials = 128;
  std::uint64_t seed = 0;
  std::string output;
  TruthConfig truth;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError on missing or malformed fields. Does not build the
// environment; run_experiment validates ids.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

struct ResultRow {
  std::string series;
  std::string estimator;
  std::string env;
  std::int64_t n = 0;
  int trial = 0;
  double estimate = 0.0;
  double truth = 0.0;
  double squared_error = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct SeriesTruth {
  std::string series;
  double evaluation_value = 0.0;
  double behavior_value = 0.0;
  double standard_error = 0.0;  // of evaluation_value; 0 when exact
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // ordered by series, estimator, n, trial (config order)
  std::vector<SeriesTruth> truths;
};

// For every series, n and trial: one dataset from RandomStream seeds derived
// from (seed, series name, n, trial), every estimator applied to it. Rows do
// not depend on `parallelism`. Unknown ids throw ConfigError before sampling.
ExperimentResult run_experiment(const ExperimentConfig& config, int parallelism = 1);

struct SummaryRow {
  std::string series;
  std::string estimator;
  std::int64_t n = 0;
  int trials = 0;
  double mse = 0.0;
  double half_width = 0.0;  // 95% normal approximation
};

// Groups by (series, estimator, n) in first-appearance order. Throws
// std::invalid_argument on a group with fewer than 2 trials.
std::vector<SummaryRow> mse_summary(const std::vector<ResultRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
std::vector<ResultRow> parse_rows_csv(std::istream& in);

// Writes `path` (rows), `<stem>.summary.csv` and `<stem>.meta.json` next to
// it, where <stem> is `path` without a trailing ".csv".
void emit_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::string& path);

std::string config_hash(const ExperimentConfig& config);

}  // namespace ope
