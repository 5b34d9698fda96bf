#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "celle/boolfn.hpp"
#include "celle/defaults.hpp"
#include "celle/miner.hpp"
#include "celle/rules.hpp"
#include "support/oracles.hpp"

using namespace celle;

namespace {

// Five disjoint NAND2 gates, each on its own PI pair.
Netlist five_nands(const CellLibrary& lib) {
    std::ostringstream doc;
    doc << R"({"pis": [)";
    for (int i = 0; i < 5; ++i)
        doc << (i ? "," : "") << "\"x" << i << "\",\"y" << i << "\"";
    doc << R"(], "pos": [)";
    for (int i = 0; i < 5; ++i) doc << (i ? "," : "") << "\"n" << i << "\"";
    doc << R"(], "gates": [)";
    for (int i = 0; i < 5; ++i) {
        if (i) doc << ",";
        doc << R"({"id": "g)" << i << R"(", "cell": "NAND2X1", "conn": {"A": "x)" << i
            << R"(", "B": "y)" << i << R"(", "Y": "n)" << i << R"("}})";
    }
    doc << "]}";
    return parse_netlist(doc.str(), lib);
}

MiningParams params(std::uint32_t theta, std::uint32_t n = 5, std::uint32_t k = 3) {
    MiningParams p;
    p.min_support = theta;
    p.max_gates = n;
    p.max_inputs = k;
    return p;
}

}  // namespace

TEST_CASE("five disjoint NAND copies yield one pattern") {
    const CellLibrary lib = parse_library(default_library_json());
    const PatternGraph pg = egraph_to_graph(build_egraph(five_nands(lib)), lib);

    const MineResult r4 = mine(pg, params(4));
    REQUIRE(r4.patterns.size() == 1);
    CHECK(r4.patterns[0].support == 5);
    CHECK(pattern_shape(r4.patterns[0].code, pg.labels).gates == 1);
    CHECK(r4.patterns[0].projections.size() == 5);

    const MineResult r6 = mine(pg, params(6));
    CHECK(r6.patterns.empty());
}

TEST_CASE("find_frequent_1edge enumerates labeled single edges") {
    const CellLibrary lib = parse_library(default_library_json());

    const Netlist single = parse_netlist(R"({
        "pis": ["x", "y"], "pos": ["n"],
        "gates": [{"id": "g", "cell": "NAND2X1",
                   "conn": {"A": "x", "B": "y", "Y": "n"}}]})",
                                         lib);
    const PatternGraph pg1 = egraph_to_graph(build_egraph(single), lib);
    // class->NAND (Y), NAND->class (A), NAND->class (B); edges touching
    // the PI leaf nodes are not seeds.
    auto one = find_frequent_1edge(pg1, 1);
    REQUIRE(one.size() == 3);
    for (const auto& [code, projs] : one) {
        CHECK(code.size() == 1);
        CHECK(code[0].li == LabelTable::kClassLabel);
        CHECK(code[0].lj == pg1.labels.vertex_label("NAND2X1"));
        CHECK(projs.size() == 1);
    }
    CHECK(find_frequent_1edge(pg1, 2).empty());

    const PatternGraph pg5 = egraph_to_graph(build_egraph(five_nands(lib)), lib);
    std::size_t with_five = 0;
    for (const auto& [code, projs] : find_frequent_1edge(pg5, 4)) {
        if (code[0].lj == pg5.labels.vertex_label("NAND2X1")) {
            ++with_five;
            CHECK(projs.size() == 5);
        }
    }
    CHECK(with_five == 3);

    EGraph empty(lib);
    CHECK(find_frequent_1edge(egraph_to_graph(empty, lib), 1).empty());
}

TEST_CASE("is_minimal accepts exactly the canonical code") {
    const CellLibrary lib = parse_library(default_library_json());
    const PatternGraph pg = egraph_to_graph(build_egraph(five_nands(lib)), lib);
    for (const auto& [code, projs] : find_frequent_1edge(pg, 1)) {
        CHECK(is_minimal(code));
    }
    // A two-edge path started from the wrong end is not minimal.
    const MineResult mined = mine(pg, params(1));
    for (const auto& p : mined.patterns) {
        const auto all = test::all_dfs_codes(decode_code(p.code));
        REQUIRE(!all.empty());
        std::size_t accepted = 0;
        for (const auto& cand : all)
            if (is_minimal(cand)) ++accepted;
        CHECK(accepted == 1);
        CHECK(is_minimal(all.front()));
        CHECK(cmp_code(all.front(), min_dfs_code(decode_code(p.code))) == 0);
    }
}

TEST_CASE("is_illegal catches unfixable patterns") {
    const CellLibrary lib = parse_library(default_library_json());
    const LabelTable labels(lib);
    const VLabel cls = LabelTable::kClassLabel;
    const VLabel nand = labels.vertex_label("NAND2X1");
    const VLabel xorl = labels.vertex_label("XOR2X1");
    const ELabel pa = labels.edge_label("A");
    const ELabel pb = labels.edge_label("B");
    const ELabel py = labels.edge_label("Y");

    // One complete NAND gate: legal.
    const DFSCode one_gate{{0, 1, cls, py, nand, true},
                           {1, 2, nand, pa, cls, true},
                           {1, 3, nand, pb, cls, true}};
    CHECK_FALSE(is_illegal(one_gate, labels, params(1)));
    CHECK(satisfies_constraints(one_gate, labels, params(1)));

    // A class choosing two member nodes: illegal forever.
    const DFSCode two_members{{0, 1, cls, py, nand, true},
                              {0, 2, cls, py, xorl, true}};
    CHECK(is_illegal(two_members, labels, params(1)));

    // Class-level cycle through chosen gates: illegal.
    const DFSCode cycle{{0, 1, cls, py, xorl, true},
                        {1, 2, xorl, pa, cls, true},
                        {2, 3, cls, py, xorl, true},
                        {3, 0, xorl, pa, cls, true}};
    CHECK(is_illegal(cycle, labels, params(1)));

    // Too many gates for N.
    const VLabel inv = labels.vertex_label("INVX1");
    DFSCode chain{{0, 1, cls, py, inv, true}};
    std::uint16_t v = 1;
    for (int g = 0; g < 2; ++g) {
        chain.push_back({v, static_cast<std::uint16_t>(v + 1), inv, pa, cls, true});
        chain.push_back(
            {static_cast<std::uint16_t>(v + 1), static_cast<std::uint16_t>(v + 2), cls,
             py, inv, true});
        v = static_cast<std::uint16_t>(v + 2);
    }
    CHECK_FALSE(is_illegal(chain, labels, params(1, 3)));
    CHECK(is_illegal(chain, labels, params(1, 2)));
}

TEST_CASE("satisfies_constraints rejects dangling and oversized patterns") {
    const CellLibrary lib = parse_library(default_library_json());
    const LabelTable labels(lib);
    const VLabel cls = LabelTable::kClassLabel;
    const VLabel nand = labels.vertex_label("NAND2X1");
    const ELabel pa = labels.edge_label("A");
    const ELabel py = labels.edge_label("Y");

    // Member edge alone: the gate's input pins dangle.
    const DFSCode dangling{{0, 1, cls, py, nand, true}};
    CHECK_FALSE(satisfies_constraints(dangling, labels, params(1)));
    // Consumer edge alone: no output class.
    const DFSCode consumer{{0, 1, cls, pa, nand, false}};
    CHECK_FALSE(satisfies_constraints(consumer, labels, params(1)));
}

TEST_CASE("find_extensions grows from the rightmost path") {
    const CellLibrary lib = parse_library(default_library_json());
    const PatternGraph pg = egraph_to_graph(build_egraph(five_nands(lib)), lib);
    const auto seeds = find_frequent_1edge(pg, 4);
    // Member-edge seed: class->NAND with pin Y.
    const DfsEdge* member_seed = nullptr;
    std::vector<Projection> member_projs;
    for (const auto& [code, projs] : seeds) {
        if (code[0].lj == pg.labels.vertex_label("NAND2X1") &&
            code[0].lij == pg.labels.edge_label("Y")) {
            member_seed = &code[0];
            member_projs = projs;
        }
    }
    REQUIRE(member_seed != nullptr);
    const DFSCode seed{*member_seed};
    const auto exts = find_extensions(pg, 4, seed, member_projs);
    // The NAND node extends into its two input pins.
    REQUIRE(exts.size() == 2);
    for (const auto& [code, projs] : exts) {
        CHECK(code.size() == 2);
        CHECK(code[1].i == 1);
        CHECK(code[1].j == 2);
        CHECK(projs.size() == 5);
    }
    // Support threshold excludes extensions below theta.
    CHECK(find_extensions(pg, 6, seed, member_projs).empty());

    // The mined 1-gate pattern covers everything minable in its
    // component (PI leaves stay outside), so no extensions remain.
    const MineResult mined = mine(pg, params(4));
    REQUIRE(mined.patterns.size() == 1);
    CHECK(find_extensions(pg, 1, mined.patterns[0].code, mined.patterns[0].projections)
              .empty());
}

TEST_CASE("mine matches the brute-force oracle on random graphs") {
    const CellLibrary lib = parse_library(default_library_json());
    std::mt19937_64 rng(101);
    int rounds = 0;
    while (rounds < 25) {
        const Netlist nl = test::random_netlist(rng, lib, 6, 4);
        const EGraph g = test::random_egraph(rng, nl, rng() % 3);
        const PatternGraph pg = egraph_to_graph(g, lib);
        if (pg.vertex_count() > 30) continue;
        ++rounds;
        for (std::uint32_t theta : {1u, 2u}) {
            const MiningParams p = params(theta, 3, 3);
            const MineResult mined = mine(pg, p);
            const auto oracle = test::oracle_mine(pg, p);
            REQUIRE(mined.patterns.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CAPTURE(code_to_string(oracle[i].code, pg.labels));
                CHECK(cmp_code(mined.patterns[i].code, oracle[i].code) == 0);
                CHECK(mined.patterns[i].support == oracle[i].support);
            }
        }
    }
}

TEST_CASE("mining is deterministic and respects max_patterns") {
    const CellLibrary lib = parse_library(default_library_json());
    const auto rules = parse_rules(default_rules_text(), lib);
    const Netlist nl = make_adder(5, lib);
    EGraph g = build_egraph(nl);
    saturate(g, rules, SaturationLimits::for_gates(nl.gates.size()));
    const PatternGraph pg = egraph_to_graph(g, lib);

    const MineResult a = mine(pg, params(4));
    const MineResult b = mine(pg, params(4));
    REQUIRE(a.patterns.size() == b.patterns.size());
    for (std::size_t i = 0; i < a.patterns.size(); ++i)
        CHECK(cmp_code(a.patterns[i].code, b.patterns[i].code) == 0);
    CHECK_FALSE(a.truncated);

    MiningParams capped = params(4);
    capped.max_patterns = 2;
    const MineResult t = mine(pg, capped);
    CHECK(t.truncated);
    CHECK(t.patterns.size() == 2);
}

TEST_CASE("saturated adder exposes MAJ3 and XOR3 patterns") {
    const CellLibrary lib = parse_library(default_library_json());
    const auto rules = parse_rules(default_rules_text(), lib);
    const Netlist nl = make_adder(5, lib);
    EGraph g = build_egraph(nl);
    saturate(g, rules, SaturationLimits::for_gates(nl.gates.size()));
    const PatternGraph pg = egraph_to_graph(g, lib);
    const MineResult mined = mine(pg, params(4));

    bool saw_maj = false;
    bool saw_xor3 = false;
    for (const auto& p : mined.patterns) {
        const PatternFunction fn = pattern_function(p.code, pg.labels, lib);
        if (fn.table.arity != 3) continue;
        const CanonicalFunction canon = canonicalize(fn.table);
        if (canon.table.bits == 0b11101000) saw_maj = true;
        if (canon.table.bits == 0b10010110) saw_xor3 = true;
    }
    CHECK(saw_maj);
    CHECK(saw_xor3);
}

TEST_CASE("pattern JSON export") {
    const CellLibrary lib = parse_library(default_library_json());
    const PatternGraph pg = egraph_to_graph(build_egraph(five_nands(lib)), lib);
    const MineResult mined = mine(pg, params(4));
    const std::string json = serialize_patterns(mined, pg);
    CHECK(json.find("\"support\": 5") != std::string::npos);
    CHECK(json.find("NAND2X1") != std::string::npos);
    CHECK(json.find("projections_sample") != std::string::npos);
}
