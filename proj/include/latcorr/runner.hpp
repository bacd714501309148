#pragma once

// Dispatch from a parsed ExperimentConfig to the owning module, producing
// result rows. Exit statuses: 0 ok, 1 computational failure, 2 usage.

#include <iosfwd>

#include "latcorr/experiment.hpp"

namespace latcorr {

ResultTable run_experiment(const ExperimentConfig& config);

// Runs the experiment and writes the rows to config.out (or std::cout);
// catches computational errors and reports them on err.
int run_and_emit(const ExperimentConfig& config, std::ostream& err);

}  // namespace latcorr
