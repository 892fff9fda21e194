#pragma once

#include "bpcc/dag.hpp"

#include <cstdint>

namespace bpcc {

// Seeded generator of normalized, well-structured DAGs: a chain of regions,
// each either a plain chain or a fork-join block whose branches are chains.
// This is the input class the decomposition is defined on; used by the
// oracle-agreement tests and the benchmarks.
Dag random_structured_dag(uint64_t seed, int max_vertices);

} // namespace bpcc
