// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0

// Two words sit between the same pair of neighbors. Removing the one on the
// short route forces a longer detour than removing the one on the long route.

#include <iostream>

#include "ldc/ldc.hpp"

int main() {
    ldc::GraphBuilder b;
    b.add_arc("lion", "cheap", 0.5);
    b.add_arc("cheap", "tiger", 0.5);
    b.add_arc("lion", "dear", 1.0);
    b.add_arc("dear", "tiger", 1.0);
    b.add_arc("tiger", "lion", 2.0);
    const auto g = b.build();

    const auto table = ldc::compute_all(g);
    std::cout << "radius " << ldc::format_g12(table.radius) << "\n";
    ldc::write_centrality_wide(std::cout, table, ldc::kAllMeasures);
}
