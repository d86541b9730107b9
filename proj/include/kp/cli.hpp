#pragma once

// The kp command line: solve, wavefunction, sweep, chern and verify. Every
// command first resolves its inputs into one JSON run configuration, which is
// echoed as the provenance of the output and is enough to rerun it
// (`--config` accepts any output file).

#include <ostream>
#include <string>
#include <vector>

namespace kp {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitRange = 4 };

/// args[0] is the program name. Results go to `out` unless --out names a file,
/// which is only created when the command succeeds.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kp
