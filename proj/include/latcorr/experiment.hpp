#pragma once

// Experiment configs (serializable, strict-keyed), result rows, and the
// CSV/JSON emitters plus the batch plot-script generator.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "latcorr/common.hpp"

namespace latcorr {

inline constexpr const char* kArtifactVersion = "latcorr 0.1.0";

struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> params;  // canonical string values
  std::string out;            // empty = stdout
  std::string format = "csv";  // csv | json
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware
  std::uint64_t budget = 1'000'000'000;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Known commands and their allowed parameter keys; parsing rejects unknown
// commands and unknown keys.
const std::map<std::string, std::vector<std::string>>& command_schemas();

std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& json_text);

struct ResultTable {
  std::string experiment_id;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Shortest representation of v that parses back to exactly v.
std::string format_double(double v);
std::string format_int(long long v);

void write_csv(std::ostream& os, const ExperimentConfig& config, const ResultTable& table);
void write_json(std::ostream& os, const ExperimentConfig& config, const ResultTable& table);

// Standalone batch plotting script (Python/matplotlib) with the data
// embedded; picks the x column among {Q,q,mu,step} and draws value/mean
// against any theory/limit column. Throws validation_error on empty rows.
void emit_plot_script(const ResultTable& table, const std::string& path);

}  // namespace latcorr
