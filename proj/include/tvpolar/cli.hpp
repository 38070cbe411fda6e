#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace tvpolar {

/// Exit codes: 0 success, 1 malformed input or usage error, 2 when
/// check-uniqueness finds a nonempty W-set, 130 when an experiment run was
/// interrupted (completed rows are already written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;
inline constexpr int kExitNotUnique = 2;
inline constexpr int kExitInterrupted = 130;

/// Runs the `tvpolar` command line; `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                 const std::atomic<bool>* cancel = nullptr);

}  // namespace tvpolar
