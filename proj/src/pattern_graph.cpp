#include "celle/pattern_graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "celle/error.hpp"

namespace celle {

LabelTable::LabelTable(const CellLibrary& lib) {
    std::set<std::string> cell_names;
    std::set<std::string> pin_names;
    cell_names.insert(CellLibrary::kInputName);
    pin_names.insert(lib.at(CellLibrary::kInputCell).output);
    for (auto idx : lib.real_cells()) {
        const CellType& c = lib.at(idx);
        cell_names.insert(c.name);
        pin_names.insert(c.output);
        for (const auto& p : c.inputs) pin_names.insert(p);
    }
    vnames_.push_back("$class");
    for (const auto& n : cell_names) {
        vmap_[n] = static_cast<VLabel>(vnames_.size());
        vnames_.push_back(n);
    }
    for (const auto& n : pin_names) {
        emap_[n] = static_cast<ELabel>(enames_.size());
        enames_.push_back(n);
    }
    arity_.assign(vnames_.size(), 0);
    in_pins_.assign(vnames_.size(), {});
    out_pin_.assign(vnames_.size(), 0);
    input_label_ = vmap_.at(CellLibrary::kInputName);
    out_pin_[input_label_] = emap_.at(lib.at(CellLibrary::kInputCell).output);
    for (auto idx : lib.real_cells()) {
        const CellType& c = lib.at(idx);
        const VLabel l = vmap_.at(c.name);
        arity_[l] = c.arity();
        out_pin_[l] = emap_.at(c.output);
        for (const auto& p : c.inputs) in_pins_[l].push_back(emap_.at(p));
    }
}

VLabel LabelTable::vertex_label(const std::string& name) const {
    if (name == "$class") return kClassLabel;
    auto it = vmap_.find(name);
    if (it == vmap_.end()) throw Error("labels: unknown vertex label " + name);
    return it->second;
}

ELabel LabelTable::edge_label(const std::string& name) const {
    auto it = emap_.find(name);
    if (it == emap_.end()) throw Error("labels: unknown pin label " + name);
    return it->second;
}

int LabelTable::pin_role(VLabel cell, ELabel pin) const {
    if (cell == kClassLabel) return 0;
    if (out_pin_[cell] == pin) return 1;
    const auto& ins = in_pins_[cell];
    if (std::find(ins.begin(), ins.end(), pin) != ins.end()) return -1;
    return 0;
}

PatternGraph egraph_to_graph(const EGraph& g, const CellLibrary& lib) {
    PatternGraph pg(lib);

    const std::vector<EClassId> classes = g.classes();
    std::map<EClassId, std::uint32_t> class_vertex;
    pg.n_class_vertices = classes.size();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        class_vertex[classes[i]] = static_cast<std::uint32_t>(i);
        pg.vlabel.push_back(LabelTable::kClassLabel);
        pg.origin_class.push_back(classes[i]);
    }
    std::map<ENodeId, std::uint32_t> node_vertex;
    for (ENodeId n = 0; n < g.node_arena_size(); ++n) {
        if (!g.alive(n)) continue;
        const std::uint32_t v = static_cast<std::uint32_t>(pg.vlabel.size());
        node_vertex[n] = v;
        const std::string name = g.op_name(g.node(n).op);
        if (!lib.find(name) && name != CellLibrary::kInputName)
            throw Error("graphify: op " + name + " missing from library");
        pg.vlabel.push_back(pg.labels.vertex_label(name));
        pg.origin_node.push_back(n);
    }
    pg.out_edges.assign(pg.vlabel.size(), {});
    pg.in_edges.assign(pg.vlabel.size(), {});

    auto add_edge = [&](std::uint32_t from, std::uint32_t to, ELabel label) {
        const auto idx = static_cast<std::uint32_t>(pg.edges.size());
        pg.edges.push_back({from, to, label});
        pg.out_edges[from].push_back(idx);
        pg.in_edges[to].push_back(idx);
    };

    // Stage 1: class -> member node, labeled with the node's output pin.
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (ENodeId n : g.members(classes[i])) {
            const std::uint32_t op = g.node(n).op;
            const ELabel out_pin =
                g.is_input_op(op)
                    ? pg.labels.edge_label(g.lib().at(CellLibrary::kInputCell).output)
                    : pg.labels.edge_label(g.lib().at(op).output);
            add_edge(static_cast<std::uint32_t>(i), node_vertex.at(n), out_pin);
        }
    }
    // Stage 2: node -> child class per input pin, in pin order.
    for (const auto& [n, v] : node_vertex) {
        const ENode& node = g.node(n);
        if (g.is_input_op(node.op)) continue;
        const CellType& cell = g.lib().at(node.op);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            add_edge(v, class_vertex.at(g.find(node.children[i])),
                     pg.labels.edge_label(cell.inputs[i]));
        }
    }
    return pg;
}

GraphCounts vertex_count_report(const PatternGraph& pg) {
    return {pg.n_class_vertices, pg.vertex_count() - pg.n_class_vertices, pg.edges.size()};
}

std::string to_dot(const PatternGraph& pg) {
    std::ostringstream out;
    out << "digraph egraph {\n  rankdir=TB;\n";
    for (std::uint32_t v = 0; v < pg.vertex_count(); ++v) {
        if (pg.is_class_vertex(v)) {
            out << "  v" << v << " [shape=ellipse,label=\"c" << pg.origin_class[v]
                << "\"];\n";
        } else {
            out << "  v" << v << " [shape=box,label=\""
                << pg.labels.vertex_name(pg.vlabel[v]) << "\"];\n";
        }
    }
    for (const auto& e : pg.edges) {
        out << "  v" << e.from << " -> v" << e.to << " [label=\""
            << pg.labels.edge_name(e.label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace celle
