#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celle/miner.hpp"
#include "celle/truth_table.hpp"

namespace celle {

// Product term: `mask` marks the variables that appear, `value` their
// required polarity (value is a subset of mask).
struct Cube {
    std::uint8_t mask = 0;
    std::uint8_t value = 0;

    bool covers(std::uint32_t row) const { return (row & mask) == value; }
    int literals() const;
    bool operator==(const Cube&) const = default;
};

struct MinimizedSOP {
    std::uint8_t arity = 0;
    std::vector<Cube> cubes;  // empty = constant 0; one empty cube = constant 1

    bool eval(std::uint32_t row) const;
    int total_literals() const;
    // True when every literal is negated (directly CMOS-realizable
    // without an output inverter).
    bool all_negative() const;
};

// Exact two-level minimization: prime implicants by iterative merging,
// minimum cover by Petrick expansion. Ties broken by fewer total
// literals, then by (mask, value) cube order.
MinimizedSOP quine_mccluskey(const TruthTable& t);

std::string sop_to_string(const MinimizedSOP& sop,
                          const std::vector<std::string>& var_names = {});

// Boolean function of a mined pattern over its SI classes, inputs
// ordered by first appearance in the minimal code.
struct PatternFunction {
    std::vector<std::uint32_t> input_vertices;  // pattern class vertices
    TruthTable table;
};

PatternFunction pattern_function(const DFSCode& code, const LabelTable& labels,
                                 const CellLibrary& lib);

// Truth table minimized over all input permutations. perm[i] is the
// original input position feeding canonical input i.
struct CanonicalFunction {
    TruthTable table;
    std::vector<std::uint8_t> perm;
    bool operator==(const CanonicalFunction& o) const { return table == o.table; }
};

CanonicalFunction canonicalize(const TruthTable& t);
TruthTable permute_inputs(const TruthTable& t, const std::vector<std::uint8_t>& perm);

// One structurally distinct member of a pattern group.
struct GroupMember {
    DFSCode code;
    std::vector<Projection> projections;
    std::uint32_t support = 0;
    std::vector<std::uint32_t> input_vertices;  // SI order of this member
    std::uint32_t output_vertex = 0;
    std::vector<std::uint8_t> perm;  // canonical input i <- member input perm[i]
    std::uint32_t gates = 0;
};

// Pattern group: pairwise functionally equivalent subcircuits bucketed
// by canonical function.
struct PatternGroup {
    CanonicalFunction function;
    MinimizedSOP sop;  // of the canonical table
    std::vector<GroupMember> members;
    std::uint32_t support = 0;  // distinct output classes across members
};

std::vector<PatternGroup> group_by_function(const MineResult& mined,
                                            const PatternGraph& pg,
                                            const CellLibrary& lib);

}  // namespace celle
