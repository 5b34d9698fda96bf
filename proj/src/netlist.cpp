#include "celle/netlist.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

#include "celle/error.hpp"

namespace celle {

using ordered_json = nlohmann::ordered_json;

void Netlist::validate() {
    driver.clear();
    topo_order.clear();

    std::set<std::string> pi_set;
    for (const auto& pi : pis) {
        if (!pi_set.insert(pi).second) throw Error("netlist: duplicate PI: " + pi);
        driver[pi] = -1;
    }
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const Gate& gate = gates[g];
        const CellType& cell = lib->at(gate.cell);
        if (gate.input_nets.size() != cell.inputs.size())
            throw Error("netlist: gate " + gate.id + " pin count mismatch for cell " + cell.name);
        auto [it, fresh] = driver.emplace(gate.output_net, static_cast<int>(g));
        if (!fresh)
            throw Error("netlist: net " + gate.output_net + " is multiply driven (gate " +
                        gate.id + ")");
    }
    for (const Gate& gate : gates) {
        for (const auto& net : gate.input_nets) {
            if (!driver.count(net))
                throw Error("netlist: gate " + gate.id + " input net " + net +
                            " has no driver and is not a PI");
        }
    }
    std::set<std::string> po_set;
    for (const auto& po : pos) {
        po_set.insert(po);
        if (!driver.count(po)) throw Error("netlist: PO net " + po + " has no driver");
    }

    // Every non-PO gate output must drive at least one sink.
    std::set<std::string> consumed;
    for (const Gate& gate : gates)
        for (const auto& net : gate.input_nets) consumed.insert(net);
    for (const Gate& gate : gates) {
        if (!consumed.count(gate.output_net) && !po_set.count(gate.output_net))
            throw Error("netlist: gate " + gate.id + " output " + gate.output_net +
                        " drives nothing and is not a PO");
    }

    // Kahn topological sort over gates; leftovers mean a cycle.
    std::vector<std::uint32_t> indeg(gates.size(), 0);
    std::vector<std::vector<std::uint32_t>> fanout(gates.size());
    for (std::size_t g = 0; g < gates.size(); ++g) {
        for (const auto& net : gates[g].input_nets) {
            const int d = driver.at(net);
            if (d >= 0) {
                ++indeg[g];
                fanout[d].push_back(static_cast<std::uint32_t>(g));
            }
        }
    }
    std::deque<std::uint32_t> ready;
    for (std::size_t g = 0; g < gates.size(); ++g)
        if (indeg[g] == 0) ready.push_back(static_cast<std::uint32_t>(g));
    while (!ready.empty()) {
        const std::uint32_t g = ready.front();
        ready.pop_front();
        topo_order.push_back(g);
        for (auto s : fanout[g])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (topo_order.size() != gates.size())
        throw Error("netlist: combinational cycle detected");
}

std::size_t Netlist::edge_count() const {
    std::size_t edges = pos.size();
    for (const Gate& g : gates) edges += g.input_nets.size();
    return edges;
}

double Netlist::total_area() const {
    double area = 0.0;
    for (const Gate& g : gates) area += lib->at(g.cell).area;
    return area;
}

std::size_t Netlist::depth() const {
    std::vector<std::size_t> level(gates.size(), 0);
    std::size_t best = 0;
    for (auto g : topo_order) {
        std::size_t in = 0;
        for (const auto& net : gates[g].input_nets) {
            const int d = driver.at(net);
            if (d >= 0) in = std::max(in, level[d]);
        }
        level[g] = in + 1;
        best = std::max(best, level[g]);
    }
    return best;
}

std::map<std::string, bool> Netlist::simulate(const std::map<std::string, bool>& assignment) const {
    std::map<std::string, bool> value;
    for (const auto& pi : pis) {
        auto it = assignment.find(pi);
        if (it == assignment.end()) throw Error("simulate: assignment misses PI " + pi);
        value[pi] = it->second;
    }
    for (auto g : topo_order) {
        const Gate& gate = gates[g];
        std::uint32_t row = 0;
        for (std::size_t i = 0; i < gate.input_nets.size(); ++i)
            row |= static_cast<std::uint32_t>(value.at(gate.input_nets[i])) << i;
        value[gate.output_net] = lib->at(gate.cell).function.eval(row);
    }
    std::map<std::string, bool> out;
    for (const auto& po : pos) out[po] = value.at(po);
    return out;
}

std::vector<std::uint64_t> Netlist::simulate_words(const std::vector<std::uint64_t>& words) const {
    if (words.size() != pis.size())
        throw Error("simulate_words: expected one word per PI");
    std::map<std::string, std::uint64_t> value;
    for (std::size_t i = 0; i < pis.size(); ++i) value[pis[i]] = words[i];
    std::vector<std::uint64_t> in(8, 0);
    for (auto g : topo_order) {
        const Gate& gate = gates[g];
        const TruthTable& t = lib->at(gate.cell).function;
        for (std::size_t i = 0; i < gate.input_nets.size(); ++i)
            in[i] = value.at(gate.input_nets[i]);
        std::uint64_t acc = 0;
        for (std::uint32_t row = 0; row < t.rows(); ++row) {
            if (!t.eval(row)) continue;
            std::uint64_t term = ~0ull;
            for (std::uint32_t i = 0; i < t.arity; ++i)
                term &= ((row >> i) & 1u) ? in[i] : ~in[i];
            acc |= term;
        }
        value[gate.output_net] = acc;
    }
    std::vector<std::uint64_t> out;
    for (const auto& po : pos) out.push_back(value.at(po));
    return out;
}

Netlist parse_netlist(const std::string& text, const CellLibrary& lib) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("netlist: invalid JSON: ") + e.what());
    }
    Netlist nl;
    nl.lib = &lib;
    try {
        for (const auto& pi : doc.at("pis")) nl.pis.push_back(pi.get<std::string>());
        for (const auto& po : doc.at("pos")) nl.pos.push_back(po.get<std::string>());
        for (const auto& jg : doc.at("gates")) {
            Gate gate;
            gate.id = jg.at("id").get<std::string>();
            const std::string cell_name = jg.at("cell").get<std::string>();
            const CellType* cell = lib.find(cell_name);
            if (!cell) throw Error("netlist: gate " + gate.id + " uses unknown cell " + cell_name);
            if (cell_name == CellLibrary::kInputName || cell_name == CellLibrary::kOutputName)
                throw Error("netlist: gate " + gate.id + " may not instantiate pseudo-cell");
            gate.cell = lib.index_of(cell_name);
            const auto& conn = jg.at("conn");
            std::size_t used = 0;
            for (const auto& pin : cell->inputs) {
                if (!conn.contains(pin))
                    throw Error("netlist: gate " + gate.id + " misses pin " + pin);
                gate.input_nets.push_back(conn.at(pin).get<std::string>());
                ++used;
            }
            if (!conn.contains(cell->output))
                throw Error("netlist: gate " + gate.id + " misses output pin " + cell->output);
            gate.output_net = conn.at(cell->output).get<std::string>();
            ++used;
            if (conn.size() != used) {
                for (auto it = conn.begin(); it != conn.end(); ++it) {
                    const std::string pin = it.key();
                    if (pin != cell->output &&
                        std::find(cell->inputs.begin(), cell->inputs.end(), pin) ==
                            cell->inputs.end())
                        throw Error("netlist: gate " + gate.id + " has unknown pin " + pin);
                }
            }
            nl.gates.push_back(std::move(gate));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(std::string("netlist: malformed document: ") + e.what());
    }
    nl.validate();
    return nl;
}

std::string serialize_netlist(const Netlist& nl) {
    ordered_json doc;
    doc["pis"] = nl.pis;
    doc["pos"] = nl.pos;
    doc["gates"] = ordered_json::array();
    for (const Gate& g : nl.gates) {
        const CellType& cell = nl.lib->at(g.cell);
        ordered_json jg;
        jg["id"] = g.id;
        jg["cell"] = cell.name;
        ordered_json conn;
        for (std::size_t i = 0; i < cell.inputs.size(); ++i)
            conn[cell.inputs[i]] = g.input_nets[i];
        conn[cell.output] = g.output_net;
        jg["conn"] = std::move(conn);
        doc["gates"].push_back(std::move(jg));
    }
    return doc.dump(2) + "\n";
}

namespace {

int require_function(const CellLibrary& lib, const TruthTable& t, bool optional = false) {
    const int idx = lib.find_by_function(t);
    if (idx < 0 && !optional)
        throw Error("make_adder: library lacks a cell with function " + format_truth(t));
    return idx;
}

}  // namespace

Netlist make_adder(std::uint32_t width, const CellLibrary& lib) {
    if (width == 0) throw Error("make_adder: width must be positive");

    const TruthTable xor2{2, 0b0110};
    const TruthTable and2{2, 0b1000};
    const TruthTable or2{2, 0b1110};
    const TruthTable nand2{2, 0b0111};

    const int xor_cell = require_function(lib, xor2);
    const int and_cell = require_function(lib, and2, true);
    const int or_cell = require_function(lib, or2, true);
    const int nand_cell = require_function(lib, nand2, true);
    const bool pg_form = and_cell >= 0 && or_cell >= 0;
    if (!pg_form && nand_cell < 0)
        throw Error("make_adder: library lacks AND2/OR2 or NAND2 equivalents");

    Netlist nl;
    nl.lib = &lib;
    for (std::uint32_t i = 0; i < width; ++i) nl.pis.push_back("a" + std::to_string(i));
    for (std::uint32_t i = 0; i < width; ++i) nl.pis.push_back("b" + std::to_string(i));
    nl.pis.push_back("cin");

    auto add_gate = [&](const std::string& id, int cell, std::vector<std::string> ins,
                        const std::string& out) {
        Gate g;
        g.id = id;
        g.cell = static_cast<std::uint32_t>(cell);
        g.input_nets = std::move(ins);
        g.output_net = out;
        nl.gates.push_back(std::move(g));
    };

    std::string carry = "cin";
    for (std::uint32_t i = 0; i < width; ++i) {
        const std::string fa = "fa" + std::to_string(i);
        const std::string a = "a" + std::to_string(i);
        const std::string b = "b" + std::to_string(i);
        const std::string x = fa + "_x";
        const std::string s = "s" + std::to_string(i);
        const std::string c = fa + "_c";
        add_gate(fa + "_xab", xor_cell, {a, b}, x);
        add_gate(fa + "_sum", xor_cell, {x, carry}, s);
        if (pg_form) {
            // carry = ab + (a+b)c, propagate/generate form
            const std::string p = fa + "_p";
            const std::string g = fa + "_g";
            const std::string t = fa + "_t";
            add_gate(fa + "_por", or_cell, {a, b}, p);
            add_gate(fa + "_gen", and_cell, {a, b}, g);
            add_gate(fa + "_tan", and_cell, {p, carry}, t);
            add_gate(fa + "_cor", or_cell, {g, t}, c);
        } else {
            // carry = nand(nand(a,b), nand(x,c))
            const std::string g = fa + "_g";
            const std::string h = fa + "_h";
            add_gate(fa + "_gnd", nand_cell, {a, b}, g);
            add_gate(fa + "_hnd", nand_cell, {x, carry}, h);
            add_gate(fa + "_cnd", nand_cell, {g, h}, c);
        }
        carry = c;
    }
    for (std::uint32_t i = 0; i < width; ++i) nl.pos.push_back("s" + std::to_string(i));
    // Expose the final carry under the conventional name.
    nl.gates.back().output_net = "cout";
    nl.pos.push_back("cout");

    nl.validate();
    return nl;
}

}  // namespace celle
