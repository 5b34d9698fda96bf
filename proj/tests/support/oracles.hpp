#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "celle/boolfn.hpp"
#include "celle/egraph.hpp"
#include "celle/miner.hpp"
#include "celle/netlist.hpp"
#include "celle/pattern_graph.hpp"

namespace celle::test {

// Seeded random combinational netlist: gates pick random cells and
// random already-driven nets; POs are the undriven outputs.
Netlist random_netlist(std::mt19937_64& rng, const CellLibrary& lib,
                       std::size_t max_gates, std::size_t max_pis);

// Independent netlist evaluator: demand-driven recursion from each PO
// (the implementation simulates bottom-up in topological order).
std::map<std::string, bool> oracle_simulate(const Netlist& nl,
                                            const std::map<std::string, bool>& assignment);

// Random e-graph with multi-member classes and possible cycles: builds
// the netlist e-graph, then applies seeded random merges and rebuilds.
EGraph random_egraph(std::mt19937_64& rng, const Netlist& nl, std::size_t merges);

// Exhaustive enumeration of every complete DFS code of a pattern.
std::vector<DFSCode> all_dfs_codes(const CodeGraph& g, std::size_t cap = 200000);

// Brute-force miner: enumerates every connected subgraph (up to the
// params' gate bound), filters with an independent validity check and
// groups by minimal code. Returns code -> (support, instance count).
struct OracleMined {
    DFSCode code;
    std::uint32_t support = 0;
};
std::vector<OracleMined> oracle_mine(const PatternGraph& pg, const MiningParams& params);

// Independent re-implementation of the subcircuit validity rules used
// by oracle_mine (kept apart from celle::satisfies_constraints).
bool oracle_valid(const std::vector<std::uint32_t>& edge_set, const PatternGraph& pg,
                  const MiningParams& params);

// SOP checks against a table: exact equality, primality of each cube,
// irredundant cover.
bool sop_equals_table(const MinimizedSOP& sop, const TruthTable& t);
bool all_cubes_prime(const MinimizedSOP& sop, const TruthTable& t);
bool cover_irredundant(const MinimizedSOP& sop, const TruthTable& t);
// Exhaustive minimum cover size over all prime subsets (small arities).
std::size_t oracle_min_cover_size(const TruthTable& t);

}  // namespace celle::test
