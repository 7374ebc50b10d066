// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include <iostream>

#include "bbwe/cli.hpp"

int main(int argc, char** argv) { return bbwe::cli::main_entry(argc, argv, std::cout, std::cerr); }
