// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/cli.hpp"

int main(int argc, char** argv) { return sreldiag::run_cli(argc, argv); }
