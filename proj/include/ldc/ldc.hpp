// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ldc/centrality.hpp"
#include "ldc/corpus.hpp"
#include "ldc/error.hpp"
#include "ldc/graph.hpp"
#include "ldc/grid.hpp"
#include "ldc/permutation.hpp"
#include "ldc/retrieval.hpp"
#include "ldc/shortest_paths.hpp"
#include "ldc/stats.hpp"
#include "ldc/synthetic.hpp"
