#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace manet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `manetsim` invocation; `args` excludes the program name. Data go
/// to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace manet
