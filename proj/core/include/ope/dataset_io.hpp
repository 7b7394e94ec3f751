#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "ope/trajectory.hpp"

namespace ope {

// JSON Lines: one header object, then one object per trajectory. See
// docs/dataset_format.md. Doubles are written with round-trip precision.
void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset(std::ostream& out, const OptionsDataset& data);
void write_dataset(const std::string& path, const Dataset& data);
void write_dataset(const std::string& path, const OptionsDataset& data);

using AnyDataset = std::variant<Dataset, OptionsDataset>;

// Throws ConfigError on malformed input, naming the offending line.
AnyDataset read_dataset(std::istream& in);
AnyDataset read_dataset(const std::string& path);

}  // namespace ope
