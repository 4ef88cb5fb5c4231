//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_CLI_H_
#define COLDDTI_CLI_H_

namespace colddti {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitAudit = 3,
};

// Entry point behind the colddti binary. Subcommands: validate-data, split,
// train, eval, export-attention, ablate, check-grad, gen-synthetic.
int run(int argc, char **argv);

}  // namespace colddti

#endif  // COLDDTI_CLI_H_
