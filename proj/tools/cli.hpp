#pragma once

#include <string>
#include <vector>

namespace qnls {

/// Load a run configuration, apply dotted-path overrides ("grid.nodes=8001"),
/// dispatch the named command and persist its outputs. Exit status: 0 on
/// success/convergence, 2 on non-convergence or solver failure, 1 on a
/// validation error (the message names the offending field or hypothesis).
int run_config_file(const std::string& config_path,
                    const std::vector<std::string>& overrides, bool quiet);

int cli_main(int argc, char** argv);

} // namespace qnls
