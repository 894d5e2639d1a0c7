#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tfc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitNoSolution = 2,
  kExitConfig = 3,
  kExitInfinite = 4,
};

/// Entry point of `tfc-solve`. Artifacts go to --out (default "."),
/// summaries to `out`, diagnostics to `err` as "error[<code>]: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct MRange {
  int lo = 0;
  int hi = 0;
};

/// "17" or "3..23". Throws ConfigError.
MRange parse_m_range(std::string_view text);

/// %.17g; non-finite values print as nan / inf / -inf.
std::string format_real(double v);

/// JSON text with every floating-point number printed by format_real.
/// Non-finite numbers become null.
std::string dump_json(const nlohmann::json& j);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace tfc::cli
