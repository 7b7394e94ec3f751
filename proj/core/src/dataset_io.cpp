#include "ope/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ope/types.hpp"

namespace ope {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "ope-dataset";
constexpr int kVersion = 1;

json parse_or_null(const std::string& text) {
  if (text.empty()) return nullptr;
  return json::parse(text);
}

json header(const DatasetMetadata& meta, const char* kind, std::size_t count) {
  return {{"format", kFormat},
          {"version", kVersion},
          {"kind", kind},
          {"environment", parse_or_null(meta.environment)},
          {"behavior", parse_or_null(meta.behavior_policy)},
          {"seed", meta.seed},
          {"count", count}};
}

json steps_json(const Trajectory& t) {
  return {{"observations", t.observations},
          {"actions", t.actions},
          {"rewards", t.rewards},
          {"behavior_probs", t.behavior_probs}};
}

Trajectory steps_from(const json& j) {
  Trajectory t;
  j.at("observations").get_to(t.observations);
  j.at("actions").get_to(t.actions);
  j.at("rewards").get_to(t.rewards);
  j.at("behavior_probs").get_to(t.behavior_probs);
  t.validate();
  return t;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& data) {
  out << header(data.metadata, "primitive", data.size()).dump() << '\n';
  for (const auto& t : data.trajectories) out << steps_json(t).dump() << '\n';
}

void write_dataset(std::ostream& out, const OptionsDataset& data) {
  out << header(data.metadata, "options", data.size()).dump() << '\n';
  for (const auto& t : data.trajectories) {
    json segments = json::array();
    for (const auto& s : t.segments) {
      json j = steps_json(s.steps);
      j["option"] = s.option;
      j["option_prob"] = s.option_probability;
      j["start_observation"] = s.start_observation;
      j["truncated"] = s.truncated;
      segments.push_back(std::move(j));
    }
    out << json{{"segments", std::move(segments)}}.dump() << '\n';
  }
}

void write_dataset(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

void write_dataset(const std::string& path, const OptionsDataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

AnyDataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  auto fail = [&](const std::string& what) {
    return ConfigError("dataset line " + std::to_string(line_number) + ": " + what);
  };

  if (!std::getline(in, line)) throw ConfigError("dataset is empty");
  ++line_number;
  json head;
  DatasetMetadata meta;
  std::string kind;
  std::size_t count = 0;
  try {
    head = json::parse(line);
    if (head.at("format") != kFormat) throw fail("not an ope-dataset file");
    if (head.at("version") != kVersion) throw fail("unsupported version");
    kind = head.at("kind").get<std::string>();
    if (!head.at("environment").is_null()) meta.environment = head["environment"].dump();
    if (!head.at("behavior").is_null()) meta.behavior_policy = head["behavior"].dump();
    meta.seed = head.at("seed").get<std::uint64_t>();
    count = head.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
  if (kind != "primitive" && kind != "options") throw fail("unknown kind '" + kind + "'");

  Dataset primitive{meta, {}};
  OptionsDataset options{meta, {}};
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (kind == "primitive") {
        primitive.trajectories.push_back(steps_from(j));
        continue;
      }
      HighLevelTrajectory t;
      for (const auto& sj : j.at("segments")) {
        Segment s;
        s.steps = steps_from(sj);
        s.option = sj.at("option").get<std::string>();
        s.option_probability = sj.at("option_prob").get<double>();
        s.start_observation = sj.at("start_observation").get<ObservationId>();
        s.truncated = sj.at("truncated").get<bool>();
        s.accumulated_reward = s.steps.total_return();
        t.segments.push_back(std::move(s));
      }
      t.validate();
      options.trajectories.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  const std::size_t read = kind == "primitive" ? primitive.size() : options.size();
  if (read != count) {
    throw ConfigError("dataset header promises " + std::to_string(count) + " trajectories, found " +
                      std::to_string(read));
  }
  if (kind == "primitive") return primitive;
  return options;
}

AnyDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset " + path);
  return read_dataset(in);
}

}  // namespace ope
