//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/cli.h"

int main(int argc, char **argv) { return colddti::run(argc, argv); }
