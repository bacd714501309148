#include "latcorr/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace latcorr {

const std::map<std::string, std::vector<std::string>>& command_schemas() {
  static const std::map<std::string, std::vector<std::string>> schemas = {
      {"pair-correlation", {"Q", "x", "y", "lambda", "oracle"}},
      {"nu-correlation", {"Q", "x", "y", "nu", "lambdas"}},
      {"avg-pair-correlation", {"Q", "lambda", "disc", "samples", "grid-step", "mode"}},
      {"gq", {"Q", "mu", "disc"}},
      {"sq", {"Q", "disc"}},
      {"mq", {"Q", "r0"}},
      {"phi-integrals", {"alpha0", "beta0", "count", "tol"}},
      {"kloosterman", {"m", "n", "q", "incomplete", "lo", "hi"}},
      {"hyperbola-count", {"q", "h", "lo1", "hi1", "lo2", "hi2"}},
      {"coprime-count", {"a", "b", "d"}},
      {"solution-pairs", {"a", "b", "q", "list"}},
      {"divergence-demo", {"x", "y", "Q", "lambdas", "delta", "T", "M"}},
      {"verify", {"suite"}},
      {"emit-plots", {"in"}},
  };
  return schemas;
}

std::string serialize_config(const ExperimentConfig& config) {
  nlohmann::json j;
  j["command"] = config.command;
  j["params"] = config.params;
  j["out"] = config.out;
  j["format"] = config.format;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  j["budget"] = config.budget;
  return j.dump();
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("bad config JSON: ") + e.what());
  }
  static const std::vector<std::string> top_keys = {"command", "params", "out",
                                                    "format",  "seed",   "threads", "budget"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(top_keys.begin(), top_keys.end(), it.key()) == top_keys.end())
      throw config_error("unknown config key: " + it.key());
  }
  ExperimentConfig c;
  c.command = j.at("command").get<std::string>();
  const auto& schemas = command_schemas();
  auto schema = schemas.find(c.command);
  if (schema == schemas.end()) throw config_error("unknown command: " + c.command);
  if (j.contains("params")) {
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      if (std::find(schema->second.begin(), schema->second.end(), it.key()) ==
          schema->second.end())
        throw config_error("unknown parameter for " + c.command + ": " + it.key());
      c.params[it.key()] = it.value().get<std::string>();
    }
  }
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  if (c.format != "csv" && c.format != "json")
    throw config_error("format must be csv or json");
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("budget")) c.budget = j["budget"].get<std::uint64_t>();
  return c;
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string format_int(long long v) { return std::to_string(v); }

void write_csv(std::ostream& os, const ExperimentConfig& config, const ResultTable& table) {
  os << "# " << kArtifactVersion << "\n";
  os << "# config: " << serialize_config(config) << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << table.header[i] << (i + 1 < table.header.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_json(std::ostream& os, const ExperimentConfig& config, const ResultTable& table) {
  (void)config;
  for (const auto& row : table.rows) {
    nlohmann::json j;
    for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i)
      j[table.header[i]] = row[i];
    os << j.dump() << "\n";
  }
}

void emit_plot_script(const ResultTable& table, const std::string& path) {
  if (table.rows.empty()) throw validation_error("no rows to plot");
  auto find_col = [&](std::initializer_list<const char*> names) -> int {
    for (const char* n : names)
      for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == n) return static_cast<int>(i);
    return -1;
  };
  int xcol = find_col({"Q", "q", "mu", "step", "alpha0"});
  int ycol = find_col({"mean", "value", "r6_lower_bound", "count"});
  int theory = find_col({"theory", "limit", "paper_floor"});
  int err = find_col({"stderr"});
  if (xcol < 0 || ycol < 0)
    throw validation_error("rows lack a plottable (x, value) column pair");
  std::ofstream f(path);
  if (!f) throw validation_error("cannot open output path: " + path);
  auto emit_list = [&](int col) {
    std::string s = "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      s += table.rows[r][static_cast<std::size_t>(col)];
      if (r + 1 < table.rows.size()) s += ", ";
    }
    return s + "]";
  };
  f << "#!/usr/bin/env python3\n";
  f << "# batch plot generated by " << kArtifactVersion << "\n";
  f << "import matplotlib\n";
  f << "matplotlib.use('Agg')\n";
  f << "import matplotlib.pyplot as plt\n\n";
  f << "x = " << emit_list(xcol) << "\n";
  f << "y = " << emit_list(ycol) << "\n";
  if (err >= 0) f << "yerr = " << emit_list(err) << "\n";
  if (theory >= 0) f << "theory = " << emit_list(theory) << "\n";
  f << "\nfig, ax = plt.subplots(figsize=(7, 4.5))\n";
  if (err >= 0)
    f << "ax.errorbar(x, y, yerr=yerr, marker='o', capsize=3, label='"
      << table.header[static_cast<std::size_t>(ycol)] << "')\n";
  else
    f << "ax.plot(x, y, marker='o', label='" << table.header[static_cast<std::size_t>(ycol)]
      << "')\n";
  if (theory >= 0)
    f << "ax.plot(x, theory, linestyle='--', label='"
      << table.header[static_cast<std::size_t>(theory)] << "')\n";
  f << "ax.set_xlabel('" << table.header[static_cast<std::size_t>(xcol)] << "')\n";
  f << "ax.set_ylabel('" << table.header[static_cast<std::size_t>(ycol)] << "')\n";
  f << "ax.set_title('" << table.experiment_id << "')\n";
  f << "ax.legend()\n";
  f << "fig.tight_layout()\n";
  f << "fig.savefig('" << table.experiment_id << ".png', dpi=150)\n";
  f << "print('wrote " << table.experiment_id << ".png')\n";
}

}  // namespace latcorr
