#ifndef MINKLAB_HARNESS_HPP
#define MINKLAB_HARNESS_HPP

#include "minklab/run_io.hpp"

namespace minklab {

// Exit codes: 0 success, 2 validation error, 3 numerical failure (flow
// failed), 4 search not found.
int cli_run(int argc, const char* const* argv);

int run_flow_experiment(const RunConfig& rc);
int run_search_experiment(const RunConfig& rc);
int run_scan_experiment(const RunConfig& rc);
int run_homology_suite(const RunConfig& rc);

// Builds the scan family from its spec; exposed for tests.
std::vector<std::pair<double, SupportField>> build_family(const std::string& family,
                                                          GridPtr grid);

}  // namespace minklab

#endif
