#pragma once

#include <iosfwd>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace tavis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

Report run_revival(const RunConfig& c);
Report run_qfunc(const RunConfig& c);
Report run_xdist(const RunConfig& c);
Report run_ps(const RunConfig& c);
Report run_herald(const RunConfig& c);
Report run_width(const RunConfig& c);

Report run_command(const RunConfig& c);

// Writes the report in the configured format to c.out ("-" is `stdout`).
// CSV secondary tables go to "<out stem>.<table>.csv" next to the primary.
void write_report(const Report& report, const RunConfig& c, std::ostream& stdout_stream);

}  // namespace tavis::cli
