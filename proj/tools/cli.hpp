#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jamgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

/// Entry point of the aoi-jamgame tool. `args` excludes the program name.
/// Returns 0 on success, 1 on validation errors, 2 when a verification or
/// internal assertion fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jamgame::cli
