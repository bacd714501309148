#pragma once

// Named invariant suites, runnable from the CLI `verify` subcommand. Hard
// properties fail the suite; soft convergence observations go to notes.

#include <string>
#include <utility>
#include <vector>

namespace latcorr {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> notes;
};

using SuiteFn = SuiteResult (*)();

const std::vector<std::pair<std::string, SuiteFn>>& verification_suites();

}  // namespace latcorr
