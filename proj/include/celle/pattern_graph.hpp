#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "celle/egraph.hpp"
#include "celle/library.hpp"

namespace celle {

using VLabel = std::uint16_t;
using ELabel = std::uint16_t;

// Interned vertex/edge labels shared by pattern graphs and DFS codes.
// Vertex label 0 is the reserved e-class label and sorts before every
// cell name; remaining vertex labels are cell names in string order, so
// integer comparison equals string comparison. Edge labels are pin
// names in string order.
class LabelTable {
public:
    static constexpr VLabel kClassLabel = 0;

    explicit LabelTable(const CellLibrary& lib);

    VLabel vertex_label(const std::string& name) const;
    ELabel edge_label(const std::string& name) const;
    const std::string& vertex_name(VLabel l) const { return vnames_[l]; }
    const std::string& edge_name(ELabel l) const { return enames_[l]; }
    std::size_t vertex_label_count() const { return vnames_.size(); }
    std::size_t edge_label_count() const { return enames_.size(); }

    bool is_input_label(VLabel l) const { return l == input_label_; }
    // Arity of the cell behind a vertex label (0 for the class label).
    std::uint32_t arity(VLabel l) const { return arity_[l]; }
    // +1: output pin of that cell, -1: input pin, 0: not a pin of it.
    int pin_role(VLabel cell, ELabel pin) const;
    // Input pin labels of a cell label, in declared pin order.
    const std::vector<ELabel>& input_pins(VLabel cell) const { return in_pins_[l_ok(cell)]; }
    ELabel output_pin(VLabel cell) const { return out_pin_[l_ok(cell)]; }

private:
    std::size_t l_ok(VLabel l) const { return static_cast<std::size_t>(l); }

    std::vector<std::string> vnames_;
    std::vector<std::string> enames_;
    std::map<std::string, VLabel> vmap_;
    std::map<std::string, ELabel> emap_;
    std::vector<std::uint32_t> arity_;
    std::vector<std::vector<ELabel>> in_pins_;
    std::vector<ELabel> out_pin_;
    VLabel input_label_ = 0;
};

struct PGEdge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    ELabel label = 0;
};

// Bipartite pin-labeled view of an e-graph: one vertex per canonical
// e-class and per live e-node. class->node edges carry the node's
// output pin, node->class edges the consumed input pin. May contain
// cycles inherited from the saturated e-graph.
struct PatternGraph {
    LabelTable labels;

    std::size_t n_class_vertices = 0;  // vertices [0, n) are class vertices
    std::vector<VLabel> vlabel;        // per vertex
    std::vector<PGEdge> edges;
    std::vector<std::vector<std::uint32_t>> out_edges;  // edge indices per vertex
    std::vector<std::vector<std::uint32_t>> in_edges;

    std::vector<EClassId> origin_class;  // per class vertex
    std::vector<ENodeId> origin_node;    // per node vertex, index - n_class_vertices

    explicit PatternGraph(const CellLibrary& lib) : labels(lib) {}

    std::size_t vertex_count() const { return vlabel.size(); }
    bool is_class_vertex(std::uint32_t v) const { return v < n_class_vertices; }

    // Host class vertex owning a node vertex (its single member edge).
    std::uint32_t owner_class(std::uint32_t node_vertex) const {
        return edges[in_edges[node_vertex].front()].from;
    }
};

struct GraphCounts {
    std::size_t classes = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    bool operator==(const GraphCounts&) const = default;
};

PatternGraph egraph_to_graph(const EGraph& g, const CellLibrary& lib);
GraphCounts vertex_count_report(const PatternGraph& pg);

// Graphviz rendering for debugging (class vertices drawn as ellipses,
// node vertices as boxes).
std::string to_dot(const PatternGraph& pg);

}  // namespace celle
