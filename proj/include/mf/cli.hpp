#ifndef MF_CLI_HPP
#define MF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mf::cli {

// Process exit codes.
inline constexpr int kExitFully = 0;  // also: feasible, compatible, success
inline constexpr int kExitQuantumOnly = 10;
inline constexpr int kExitNonAdmissible = 20;  // also: infeasible
inline constexpr int kExitParse = 2;
inline constexpr int kExitIncompatible = 3;
inline constexpr int kExitCellCap = 4;

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mf::cli

#endif  // MF_CLI_HPP
