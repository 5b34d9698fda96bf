#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "celle/library.hpp"

namespace celle {

struct Gate {
    std::string id;
    std::uint32_t cell = 0;                // index into CellLibrary
    std::vector<std::string> input_nets;   // one net per input pin, pin order
    std::string output_net;
};

// Gate-level combinational netlist over a cell library. Primary inputs
// and outputs are named nets; internally they are modeled as vertices
// labeled with the `input`/`output` pseudo-cells so that the DAG view
// (vertex_count/edge_count) includes them.
struct Netlist {
    const CellLibrary* lib = nullptr;
    std::vector<std::string> pis;
    std::vector<std::string> pos;
    std::vector<Gate> gates;

    // Derived, filled by validate():
    std::map<std::string, int> driver;       // net -> gate index, -1 for PI
    std::vector<std::uint32_t> topo_order;   // gate indices, inputs first

    // Checks all structural invariants and computes the derived fields.
    // Throws Error on unknown nets, multiply-driven or floating pins,
    // dangling non-PO outputs or combinational cycles.
    void validate();

    std::size_t vertex_count() const { return pis.size() + gates.size() + pos.size(); }
    std::size_t edge_count() const;

    double total_area() const;

    // Longest PI->PO path counted in gates (unit delay).
    std::size_t depth() const;

    // Evaluates the netlist on one assignment (must cover every PI).
    std::map<std::string, bool> simulate(const std::map<std::string, bool>& assignment) const;

    // 64 assignments at a time: words[i] carries one bit lane per vector
    // for PI i (in `pis` order). Returns one word per PO in `pos` order.
    std::vector<std::uint64_t> simulate_words(const std::vector<std::uint64_t>& words) const;
};

// Netlist document: { "pis": [...], "pos": [...], "gates": [ { "id",
// "cell", "conn": { pin: net } } ] }. Net names tie driver output pins
// to sink input pins; PI names are net names.
Netlist parse_netlist(const std::string& text, const CellLibrary& lib);
std::string serialize_netlist(const Netlist& nl);

// Ripple-carry adder generator: `width` full-adder stages in
// propagate/generate form (6 gates per stage when AND2/OR2 equivalents
// exist, 5 with a NAND2-only carry tree). Cells are matched by truth
// table, not by name. PIs: a0.., b0.., cin; POs: s0.., cout.
Netlist make_adder(std::uint32_t width, const CellLibrary& lib);

}  // namespace celle
