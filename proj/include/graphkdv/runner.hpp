#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "graphkdv/config.hpp"

namespace graphkdv {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_check_failed = 2 };

struct RunOutcome {
    int exit_code = exit_ok;
    nlohmann::json report;           // also written to <output_dir>/report.json
    std::vector<std::string> files;  // everything written, relative to output_dir
};

/// Runs the configured task pipeline. With write_files the report and CSV series go to config.output_dir.
/// Progress lines go to log when given.
RunOutcome run(const RunConfig& config, bool write_files = true, std::ostream* log = nullptr);

/// One row per Z of config.sweep: Omega(Z), n(E_Z), <psi, phi>, zeta and residuals. Rows run in parallel
/// and fail independently (the row carries an "error" entry).
nlohmann::json sweep(const RunConfig& config);

}  // namespace graphkdv
