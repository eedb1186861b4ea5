// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return splitkq::cli::run(argc, argv, std::cout, std::cerr);
}
