#pragma once

namespace chq {

// Exit codes: 0 success, 1 configuration or usage error, 2 solver
// non-convergence, 3 invariant failure in verify.
int run_cli(int argc, char** argv);

}  // namespace chq
