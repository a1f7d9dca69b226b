// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0

// Writes a random fluency corpus in the transcript CSV layout.
// usage: synthetic_corpus [seed] [subjects] [vocabulary]

#include <cstdlib>
#include <iostream>

#include "ldc/ldc.hpp"

int main(int argc, char** argv) {
    ldc::synthetic::CorpusShape shape;
    std::uint64_t seed = 1;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) shape.subjects = std::strtoul(argv[2], nullptr, 10);
    if (argc > 3) shape.vocabulary = std::strtoul(argv[3], nullptr, 10);
    shape.zipf = 1.0;
    ldc::write_corpus(std::cout, ldc::synthetic::corpus(shape, seed));
}
