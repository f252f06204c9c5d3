#pragma once

#include "config.hpp"

namespace isofokker::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kVerificationFailed = 2 };

/// Runs one subcommand, writing its CSV and JSON artifacts under cfg.out.
/// Returns kOk or kVerificationFailed; usage problems surface as
/// std::invalid_argument.
int run(const RunConfig& cfg);

} // namespace isofokker::cli
