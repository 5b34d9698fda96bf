#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celle/pattern_graph.hpp"

namespace celle {

// One DFS-code edge: pattern vertex i to pattern vertex j with vertex
// labels li/lj and pin label lij. Forward edges satisfy j == max+1,
// backward edges j < i. host_fwd records the host direction (i -> j);
// it is derivable from the labels (exactly one endpoint is a class and
// pins are unambiguous per cell) and excluded from comparisons.
struct DfsEdge {
    std::uint16_t i = 0;
    std::uint16_t j = 0;
    VLabel li = 0;
    ELabel lij = 0;
    VLabel lj = 0;
    bool host_fwd = true;

    bool forward() const { return j > i; }
    bool operator==(const DfsEdge& o) const {
        return i == o.i && j == o.j && li == o.li && lij == o.lij && lj == o.lj &&
               host_fwd == o.host_fwd;
    }
};

using DFSCode = std::vector<DfsEdge>;

// DFS lexicographic order on single edges (gSpan): backward edges sort
// by (i, j), forward by (j, i desc), backward-vs-forward by position
// rules; label tuples (li, lij, lj) break structural ties.
int cmp_edge(const DfsEdge& a, const DfsEdge& b);
// Lexicographic order over codes with the prefix-smaller convention.
int cmp_code(const DFSCode& a, const DFSCode& b);

std::string code_to_string(const DFSCode& code, const LabelTable& labels);

// Pattern decoded from a DFS code: a concrete small graph. Vertex
// labels are checked for consistency across edges.
struct CodeGraph {
    std::uint32_t n = 0;
    std::vector<VLabel> vlabel;
    struct Edge {
        std::uint32_t from, to;  // direction as in the host graph
        ELabel label;
    };
    std::vector<Edge> edges;
};
CodeGraph decode_code(const DFSCode& code);

// Minimal DFS code of the pattern a code describes, recomputed by
// greedy trial DFS from every start vertex/orientation.
DFSCode min_dfs_code(const CodeGraph& g);
bool is_minimal(const DFSCode& code);

// Label- and direction-preserving embedding of a pattern into the host
// graph: pattern vertex index -> host vertex, injective.
struct Projection {
    std::vector<std::uint32_t> vmap;
};

struct MiningParams {
    std::uint32_t min_support = 4;    // theta_min
    std::uint32_t max_gates = 5;      // N
    std::uint32_t max_inputs = 3;     // K
    std::size_t max_patterns = 100000;
};

struct PatternGroupRaw {
    DFSCode code;
    std::vector<Projection> projections;
    std::uint32_t support = 0;  // distinct output-class images
};

struct MineResult {
    std::vector<PatternGroupRaw> patterns;
    bool truncated = false;
};

// Structural dead ends that no extension can repair: an e-class with
// two chosen members, too many gates, a directed cycle among chosen
// gates, or two output classes that have fallen off the rightmost path.
bool is_illegal(const DFSCode& code, const LabelTable& labels, const MiningParams& params);

// Full validity: completeness, uniqueness, single output, connectivity,
// source-sink, plus the size bounds (gates in [1, N], |SI| <= K).
bool satisfies_constraints(const DFSCode& code, const LabelTable& labels,
                           const MiningParams& params);

// Pattern inputs/output as pattern vertex indices (valid codes only).
struct PatternShape {
    std::uint32_t output_vertex = 0;
    std::vector<std::uint32_t> inputs;  // SI classes by first appearance
    std::uint32_t gates = 0;
};
PatternShape pattern_shape(const DFSCode& code, const LabelTable& labels);

std::vector<std::pair<DFSCode, std::vector<Projection>>> find_frequent_1edge(
    const PatternGraph& pg, std::uint32_t min_support);

std::vector<std::pair<DFSCode, std::vector<Projection>>> find_extensions(
    const PatternGraph& pg, std::uint32_t min_support, const DFSCode& code,
    const std::vector<Projection>& projections);

MineResult mine(const PatternGraph& pg, const MiningParams& params);

std::string serialize_patterns(const MineResult& result, const PatternGraph& pg);

}  // namespace celle
