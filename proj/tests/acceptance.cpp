// Acceptance suite: runs every top-level criterion at its stated
// tolerance and prints one pass/fail line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "celle/boolfn.hpp"
#include "celle/defaults.hpp"
#include "celle/pipeline.hpp"
#include "celle/rules.hpp"
#include "celle/selector.hpp"
#include "support/oracles.hpp"

using namespace celle;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty()) {
        std::printf("[PASS] %s (%.2f s)\n", name.c_str(), secs);
    } else {
        std::printf("[FAIL] %s (%.2f s): %s\n", name.c_str(), secs, error.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("celle_accept_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct AdderRun {
    Netlist netlist;
    EGraph egraph;
    SaturationReport sat;
    std::unique_ptr<PatternGraph> pg;
    std::vector<CandidateCell> candidates;
    double seconds = 0.0;
};

AdderRun run_adder(const CellLibrary& lib, const std::vector<RewriteRule>& rules,
                   std::uint32_t width) {
    const auto start = std::chrono::steady_clock::now();
    AdderRun run{make_adder(width, lib), EGraph(lib), {}, nullptr, {}, 0.0};
    run.egraph = build_egraph(run.netlist);
    run.sat = saturate(run.egraph, rules,
                       SaturationLimits::for_gates(run.netlist.gates.size()));
    run.pg = std::make_unique<PatternGraph>(egraph_to_graph(run.egraph, lib));
    MiningParams params;  // defaults: theta=4, N=5, K=3
    const MineResult mined = mine(*run.pg, params);
    const auto groups = group_by_function(mined, *run.pg, lib);
    run.candidates = make_candidates(groups, lib, params.max_inputs, params.max_gates);
    run.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

constexpr std::uint64_t kMaj3 = 0b11101000;
constexpr std::uint64_t kXor3 = 0b10010110;

}  // namespace

int main() {
    const CellLibrary lib = parse_library(default_library_json());
    const auto rules = parse_rules(default_rules_text(), lib);

    criterion("C1 rule soundness: every default rule is exact on all assignments", [&] {
        require(rules.size() == 25, "expected 25 default rules");
        for (const auto& rule : rules)
            require(rule_is_sound(rule, lib), "unsound rule: " + rule.name);
    });

    criterion("C2 saturation soundness: 200 random netlists, exhaustive simulation", [&] {
        std::mt19937_64 rng(0xCE11E);
        for (int round = 0; round < 200; ++round) {
            const Netlist nl = test::random_netlist(rng, lib, 50, 10);
            EGraph g = build_egraph(nl);
            saturate(g, rules, SaturationLimits::for_gates(nl.gates.size()));
            require(g.check_congruence(), "congruence broken after saturation");

            const std::size_t n = nl.pis.size();
            const Extraction ex = run_extraction(g, {});
            std::vector<TermPtr> terms;
            for (const auto& po : nl.pos)
                terms.push_back(extract_term(g, g.roots.at(po), ex));

            const std::size_t total = std::size_t{1} << n;
            for (std::size_t base = 0; base < total; base += 64) {
                const std::size_t lanes = std::min<std::size_t>(64, total - base);
                std::vector<std::uint64_t> words(n, 0);
                std::map<std::string, std::uint64_t> by_name;
                for (std::size_t lane = 0; lane < lanes; ++lane)
                    for (std::size_t i = 0; i < n; ++i)
                        if (((base + lane) >> i) & 1u) words[i] |= 1ull << lane;
                for (std::size_t i = 0; i < n; ++i) by_name[nl.pis[i]] = words[i];
                const auto ref = nl.simulate_words(words);
                const std::uint64_t mask =
                    lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
                for (std::size_t p = 0; p < nl.pos.size(); ++p) {
                    require((eval_term_words(terms[p], by_name) & mask) ==
                                (ref[p] & mask),
                            "extracted term diverges from the netlist");
                }
            }
        }
    });

    criterion("C3 rewrite trace: NAND joins the NOT(AND) class; involution folds", [&] {
        const auto two = parse_rules(
            "comm_and: AND2X2(x,y) => AND2X2(y,x)\n"
            "simp_nand: INVX1(AND2X2(a,b)) => NAND2X1(a,b)\n",
            lib);
        const Netlist nl = parse_netlist(R"({
            "pis": ["a", "b"], "pos": ["y"],
            "gates": [
              {"id": "g1", "cell": "AND2X2", "conn": {"A": "a", "B": "b", "Y": "x"}},
              {"id": "g2", "cell": "INVX1", "conn": {"A": "x", "Y": "y"}}
            ]})",
                                         lib);
        EGraph g = build_egraph(nl);
        saturate(g, two, SaturationLimits{});
        bool has_not = false;
        bool has_nand = false;
        for (ENodeId n : g.members(g.find(g.roots.at("y")))) {
            const std::string op = g.op_name(g.node(n).op);
            has_not |= op == "INVX1";
            has_nand |= op == "NAND2X1";
        }
        require(has_not && has_nand, "top class must hold both NOT and NAND nodes");

        const Netlist nn = parse_netlist(R"({
            "pis": ["a"], "pos": ["y"],
            "gates": [
              {"id": "g1", "cell": "INVX1", "conn": {"A": "a", "Y": "x"}},
              {"id": "g2", "cell": "INVX1", "conn": {"A": "x", "Y": "y"}}
            ]})",
                                         lib);
        EGraph g2 = build_egraph(nn);
        saturate(g2, parse_rules("involution: INVX1(INVX1(a)) => a\n", lib),
                 SaturationLimits{});
        require(g2.find(g2.roots.at("y")) == g2.find(g2.leaves.at("a")),
                "NOT(NOT(a)) must merge with a");
    });

    criterion("C4 miner oracle: mine() equals brute-force enumeration on 100 graphs", [&] {
        std::mt19937_64 rng(0x4D1E);
        int rounds = 0;
        while (rounds < 100) {
            const Netlist nl = test::random_netlist(rng, lib, 6, 4);
            const EGraph g = test::random_egraph(rng, nl, rng() % 3);
            const PatternGraph pg = egraph_to_graph(g, lib);
            if (pg.vertex_count() > 30) continue;
            ++rounds;
            MiningParams params;
            params.max_gates = 3;
            params.min_support = 1 + rounds % 2;
            const MineResult mined = mine(pg, params);
            const auto oracle = test::oracle_mine(pg, params);
            require(mined.patterns.size() == oracle.size(),
                    "pattern count mismatch: mine " +
                        std::to_string(mined.patterns.size()) + " vs oracle " +
                        std::to_string(oracle.size()));
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                require(cmp_code(mined.patterns[i].code, oracle[i].code) == 0,
                        "pattern code mismatch");
                require(mined.patterns[i].support == oracle[i].support,
                        "pattern support mismatch");
            }
        }
    });

    criterion("C5 DFS-code canonicality: all-traversals oracle on 1000 subcircuits", [&] {
        std::mt19937_64 rng(0x5CA7);
        std::size_t checked = 0;
        while (checked < 1000) {
            const Netlist nl = test::random_netlist(rng, lib, 6, 4);
            const EGraph g = test::random_egraph(rng, nl, rng() % 3);
            const PatternGraph pg = egraph_to_graph(g, lib);
            MiningParams params;
            params.max_gates = 3;
            params.min_support = 1;
            for (const auto& pattern : mine(pg, params).patterns) {
                const CodeGraph cg = decode_code(pattern.code);
                const auto all = test::all_dfs_codes(cg);
                require(!all.empty(), "no DFS codes enumerated");
                std::size_t accepted = 0;
                for (const auto& code : all)
                    if (is_minimal(code)) ++accepted;
                require(accepted == 1, "exactly one code per class must be minimal");
                require(is_minimal(all.front()),
                        "the lexicographic minimum must be accepted");
                require(cmp_code(all.front(), pattern.code) == 0,
                        "mined code must be the lexicographic minimum");
                ++checked;
            }
        }
    });

    criterion("C6 Quine-McCluskey: exact, prime, irredundant on all small tables", [&] {
        for (std::uint32_t bits = 0; bits < 256; ++bits) {
            const TruthTable t{3, bits};
            const MinimizedSOP sop = quine_mccluskey(t);
            require(test::sop_equals_table(sop, t), "arity-3 SOP mismatch");
            require(test::all_cubes_prime(sop, t), "arity-3 non-prime cube");
            require(test::cover_irredundant(sop, t), "arity-3 redundant cover");
        }
        for (std::uint64_t bits = 0; bits < 65536; ++bits) {
            const TruthTable t{4, bits};
            const MinimizedSOP sop = quine_mccluskey(t);
            require(test::sop_equals_table(sop, t), "arity-4 SOP mismatch");
            require(test::all_cubes_prime(sop, t), "arity-4 non-prime cube");
            require(test::cover_irredundant(sop, t), "arity-4 redundant cover");
        }
    });

    criterion("C7 adder study: MAJ3+XOR3 discovered and picked, gates at 0.333", [&] {
        for (const std::uint32_t width : {16u, 32u, 64u, 128u, 256u}) {
            AdderRun run = run_adder(lib, rules, width);
            bool has_maj = false;
            bool has_xor3 = false;
            for (const auto& cand : run.candidates) {
                if (cand.function.table.arity != 3) continue;
                has_maj |= cand.function.table.bits == kMaj3;
                has_xor3 |= cand.function.table.bits == kXor3;
            }
            require(has_maj, "MAJ3 missing from candidates at width " +
                                 std::to_string(width));
            require(has_xor3, "XOR3 missing from candidates at width " +
                                  std::to_string(width));

            const ExtendedLibrary two =
                select_cells(run.candidates, 2, run.egraph, *run.pg, lib);
            require(two.extensions.size() == 2, "T=2 must pick two cells");
            std::set<std::uint64_t> picked;
            for (const auto& c : two.extensions) picked.insert(c.function.table.bits);
            require(picked == std::set<std::uint64_t>{kMaj3, kXor3},
                    "T=2 must pick the MAJ3 and XOR3 cells");

            const EvalResult eval = evaluate_extension(run.egraph, *run.pg, two);
            const double ratio = static_cast<double>(eval.gates) /
                                 static_cast<double>(run.netlist.gates.size());
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "gate ratio %.4f outside 0.333 +/- 0.05 at width %u", ratio,
                          width);
            require(std::abs(ratio - 0.333) <= 0.05, buf);
            require(eval.area < run.netlist.total_area(),
                    "estimated area must strictly decrease");
            std::snprintf(buf, sizeof buf, "width %u took %.1f s (limit 60)", width,
                          run.seconds);
            require(run.seconds < 60.0, buf);
        }
    });

    criterion("C8 scale guard: adder128 e-nodes within 10x of the gate count", [&] {
        AdderRun run = run_adder(lib, rules, 128);
        const double ratio = static_cast<double>(run.sat.enodes) /
                             static_cast<double>(run.netlist.gates.size());
        std::printf("       e-nodes %zu over %zu gates (%.2fx)\n", run.sat.enodes,
                    run.netlist.gates.size(), ratio);
        require(run.sat.enodes <= 10 * run.netlist.gates.size(),
                "e-node count exceeds 10x the gate count");
    });

    criterion("C9 report arithmetic: 2373.25 vs 1438.80 prints 39.37", [&] {
        require(format_reduction_pct(2373.25, 1438.80) == "39.37",
                "got " + format_reduction_pct(2373.25, 1438.80));
    });

    criterion("C10 determinism: identical runs produce byte-identical reports", [&] {
        TempDir dir;
        RunConfig config;
        config.netlist_path = (dir.path / "adder16.json").string();
        cmd_gen_adder(config, 16, config.netlist_path);
        config.out_dir = (dir.path / "run_a").string();
        require(cmd_extend(config) == 0, "first run failed");
        RunConfig again = config;
        again.out_dir = (dir.path / "run_b").string();
        require(cmd_extend(again) == 0, "second run failed");
        for (const char* name :
             {"report.json", "report.csv", "extended_library.json",
              "extended_netlist.json", "patterns.json", "saturation.json"}) {
            require(read_file(config.out_dir + "/" + std::string(name), "a") ==
                        read_file(again.out_dir + "/" + std::string(name), "b"),
                    std::string(name) + " differs between identical runs");
        }
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "OK", failures);
    return failures;
}
