#include <doctest.h>

#include "celle/defaults.hpp"
#include "celle/pattern_graph.hpp"
#include "celle/rules.hpp"

using namespace celle;

namespace {

Netlist not_and(const CellLibrary& lib) {
    return parse_netlist(R"({
      "pis": ["a", "b"],
      "pos": ["n2"],
      "gates": [
        {"id": "g1", "cell": "AND2X2", "conn": {"A": "a", "B": "b", "Y": "n1"}},
        {"id": "g2", "cell": "INVX1", "conn": {"A": "n1", "Y": "n2"}}
      ]
    })",
                         lib);
}

}  // namespace

TEST_CASE("label table orders class first, labels by string") {
    const CellLibrary lib = parse_library(default_library_json());
    const LabelTable labels(lib);
    CHECK(labels.vertex_label("$class") == 0);
    CHECK(labels.vertex_name(0) == "$class");
    // Comparing label ids must equal comparing label strings.
    CHECK(labels.vertex_label("AND2X2") < labels.vertex_label("INVX1"));
    CHECK(labels.vertex_label("INVX1") < labels.vertex_label("XOR2X1"));
    CHECK(labels.vertex_label("input") > labels.vertex_label("XNOR2X1"));
    CHECK(labels.pin_role(labels.vertex_label("NAND2X1"), labels.edge_label("Y")) == 1);
    CHECK(labels.pin_role(labels.vertex_label("NAND2X1"), labels.edge_label("A")) == -1);
    CHECK(labels.arity(labels.vertex_label("NAND3X1")) == 3);
}

TEST_CASE("NOT(AND) graphifies to the expected bipartite shape") {
    const CellLibrary lib = parse_library(default_library_json());
    const EGraph g = build_egraph(not_and(lib));
    const PatternGraph pg = egraph_to_graph(g, lib);
    CHECK(vertex_count_report(pg) == GraphCounts{4, 4, 7});

    for (std::uint32_t v = 0; v < pg.vertex_count(); ++v) {
        if (pg.is_class_vertex(v)) continue;
        CHECK(pg.in_edges[v].size() == 1);  // exactly one owning class
        const VLabel l = pg.vlabel[v];
        CHECK(pg.out_edges[v].size() == pg.labels.arity(l));
    }
    for (const auto& e : pg.edges)
        CHECK(pg.is_class_vertex(e.from) != pg.is_class_vertex(e.to));
}

TEST_CASE("empty e-graph gives an empty pattern graph") {
    const CellLibrary lib = parse_library(default_library_json());
    EGraph g(lib);
    const PatternGraph pg = egraph_to_graph(g, lib);
    CHECK(vertex_count_report(pg) == GraphCounts{0, 0, 0});
}

TEST_CASE("saturated class exposes multiple member edges") {
    const CellLibrary lib = parse_library(default_library_json());
    const auto rules = parse_rules("simp_nand: INVX1(AND2X2(a,b)) => NAND2X1(a,b)\n", lib);
    EGraph g = build_egraph(not_and(lib));
    saturate(g, rules, SaturationLimits{});
    const PatternGraph pg = egraph_to_graph(g, lib);

    bool found_double = false;
    for (std::uint32_t v = 0; v < pg.n_class_vertices; ++v)
        if (pg.out_edges[v].size() == 2) found_double = true;
    CHECK(found_double);
}

TEST_CASE("round trip: out-edge pins reproduce the child classes in order") {
    const CellLibrary lib = parse_library(default_library_json());
    const Netlist nl = make_adder(2, lib);
    const EGraph g = build_egraph(nl);
    const PatternGraph pg = egraph_to_graph(g, lib);
    for (std::uint32_t v = pg.n_class_vertices; v < pg.vertex_count(); ++v) {
        const ENodeId n = pg.origin_node[v - pg.n_class_vertices];
        const ENode& node = g.node(n);
        if (g.is_input_op(node.op)) continue;
        const CellType& cell = lib.at(node.op);
        REQUIRE(pg.out_edges[v].size() == node.children.size());
        for (std::size_t i = 0; i < cell.inputs.size(); ++i) {
            const ELabel pin = pg.labels.edge_label(cell.inputs[i]);
            bool matched = false;
            for (auto ei : pg.out_edges[v]) {
                if (pg.edges[ei].label != pin) continue;
                matched = pg.origin_class[pg.edges[ei].to] == g.find(node.children[i]);
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("graphify is deterministic") {
    const CellLibrary lib = parse_library(default_library_json());
    const auto rules = parse_rules(default_rules_text(), lib);
    const Netlist nl = make_adder(3, lib);
    EGraph g1 = build_egraph(nl);
    EGraph g2 = build_egraph(nl);
    saturate(g1, rules, SaturationLimits{});
    saturate(g2, rules, SaturationLimits{});
    CHECK(to_dot(egraph_to_graph(g1, lib)) == to_dot(egraph_to_graph(g2, lib)));
}

TEST_CASE("dot export distinguishes vertex kinds") {
    const CellLibrary lib = parse_library(default_library_json());
    const EGraph g = build_egraph(not_and(lib));
    const std::string dot = to_dot(egraph_to_graph(g, lib));
    CHECK(dot.find("shape=ellipse") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("AND2X2") != std::string::npos);
}
