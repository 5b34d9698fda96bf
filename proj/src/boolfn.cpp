#include "celle/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "celle/error.hpp"

namespace celle {

int Cube::literals() const { return std::popcount(static_cast<unsigned>(mask)); }

bool MinimizedSOP::eval(std::uint32_t row) const {
    for (const auto& c : cubes)
        if (c.covers(row)) return true;
    return false;
}

int MinimizedSOP::total_literals() const {
    int total = 0;
    for (const auto& c : cubes) total += c.literals();
    return total;
}

bool MinimizedSOP::all_negative() const {
    if (cubes.empty()) return false;
    for (const auto& c : cubes)
        if (c.value != 0 || c.mask == 0) return false;
    return true;
}

namespace {

using PrimeSet = std::bitset<256>;

bool absorbs(const PrimeSet& a, const PrimeSet& b) {
    return (a & b) == a;  // a subset of b: b is redundant
}

std::vector<Cube> prime_implicants(const TruthTable& t) {
    const std::uint8_t var_mask = static_cast<std::uint8_t>((1u << t.arity) - 1);
    std::vector<Cube> current;
    for (std::uint32_t row = 0; row < t.rows(); ++row)
        if (t.eval(row)) current.push_back({var_mask, static_cast<std::uint8_t>(row)});
    std::vector<Cube> primes;
    while (!current.empty()) {
        std::vector<bool> merged(current.size(), false);
        std::vector<Cube> next;
        for (std::size_t a = 0; a < current.size(); ++a) {
            for (std::size_t b = a + 1; b < current.size(); ++b) {
                if (current[a].mask != current[b].mask) continue;
                const std::uint8_t diff = current[a].value ^ current[b].value;
                if (std::popcount(static_cast<unsigned>(diff)) != 1) continue;
                merged[a] = merged[b] = true;
                const Cube c{static_cast<std::uint8_t>(current[a].mask & ~diff),
                             static_cast<std::uint8_t>(current[a].value & ~diff)};
                if (std::find(next.begin(), next.end(), c) == next.end()) next.push_back(c);
            }
        }
        for (std::size_t a = 0; a < current.size(); ++a)
            if (!merged[a]) primes.push_back(current[a]);
        current = std::move(next);
    }
    std::sort(primes.begin(), primes.end(), [](const Cube& a, const Cube& b) {
        return std::tie(a.mask, a.value) < std::tie(b.mask, b.value);
    });
    return primes;
}

}  // namespace

MinimizedSOP quine_mccluskey(const TruthTable& t) {
    MinimizedSOP sop;
    sop.arity = t.arity;
    if ((t.bits & t.row_mask()) == 0) return sop;  // constant 0

    const std::vector<Cube> primes = prime_implicants(t);
    if (primes.size() > 256) throw Error("quine_mccluskey: prime implicant overflow");

    // Petrick: product over minterms of (sum of covering primes), kept
    // irredundant via absorption.
    std::vector<PrimeSet> terms{PrimeSet{}};
    for (std::uint32_t row = 0; row < t.rows(); ++row) {
        if (!t.eval(row)) continue;
        std::vector<std::size_t> clause;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if (primes[p].covers(row)) clause.push_back(p);
        std::vector<PrimeSet> next;
        for (const auto& term : terms) {
            for (auto p : clause) {
                PrimeSet cand = term;
                cand.set(p);
                bool dominated = false;
                for (const auto& other : next)
                    if (absorbs(other, cand)) { dominated = true; break; }
                if (dominated) continue;
                next.erase(std::remove_if(next.begin(), next.end(),
                                          [&](const PrimeSet& other) {
                                              return absorbs(cand, other) && cand != other;
                                          }),
                           next.end());
                if (std::find(next.begin(), next.end(), cand) == next.end())
                    next.push_back(cand);
            }
        }
        terms = std::move(next);
    }

    // Minimum cube count, then fewest literals, then lexicographic cubes.
    auto cubes_of = [&](const PrimeSet& term) {
        std::vector<Cube> cubes;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if (term.test(p)) cubes.push_back(primes[p]);
        return cubes;  // already (mask, value)-sorted
    };
    auto literal_count = [](const std::vector<Cube>& cubes) {
        int total = 0;
        for (const auto& c : cubes) total += c.literals();
        return total;
    };
    std::vector<Cube> best;
    bool have = false;
    for (const auto& term : terms) {
        auto cand = cubes_of(term);
        if (!have) {
            best = std::move(cand);
            have = true;
            continue;
        }
        if (cand.size() != best.size()) {
            if (cand.size() < best.size()) best = std::move(cand);
            continue;
        }
        const int cl = literal_count(cand);
        const int bl = literal_count(best);
        if (cl != bl) {
            if (cl < bl) best = std::move(cand);
            continue;
        }
        if (std::lexicographical_compare(
                cand.begin(), cand.end(), best.begin(), best.end(),
                [](const Cube& a, const Cube& b) {
                    return std::tie(a.mask, a.value) < std::tie(b.mask, b.value);
                }))
            best = std::move(cand);
    }
    sop.cubes = std::move(best);
    return sop;
}

std::string sop_to_string(const MinimizedSOP& sop, const std::vector<std::string>& names) {
    if (sop.cubes.empty()) return "0";
    auto var = [&](int i) {
        if (i < static_cast<int>(names.size())) return names[i];
        return std::string(1, static_cast<char>('a' + i));
    };
    std::ostringstream out;
    for (std::size_t k = 0; k < sop.cubes.size(); ++k) {
        if (k) out << " + ";
        const Cube& c = sop.cubes[k];
        if (c.mask == 0) {
            out << "1";
            continue;
        }
        bool first = true;
        for (int i = 0; i < sop.arity; ++i) {
            if (!(c.mask & (1 << i))) continue;
            if (!first) out << "*";
            first = false;
            out << var(i);
            if (!(c.value & (1 << i))) out << "'";
        }
    }
    return out.str();
}

TruthTable permute_inputs(const TruthTable& t, const std::vector<std::uint8_t>& perm) {
    TruthTable out;
    out.arity = t.arity;
    for (std::uint32_t r = 0; r < out.rows(); ++r) {
        std::uint32_t src = 0;
        for (std::uint32_t i = 0; i < t.arity; ++i)
            if ((r >> i) & 1u) src |= 1u << perm[i];
        if (t.eval(src)) out.bits |= 1ull << r;
    }
    return out;
}

CanonicalFunction canonicalize(const TruthTable& t) {
    CanonicalFunction best;
    std::vector<std::uint8_t> perm(t.arity);
    std::iota(perm.begin(), perm.end(), 0);
    best.table = permute_inputs(t, perm);
    best.perm = perm;
    while (std::next_permutation(perm.begin(), perm.end())) {
        const TruthTable cand = permute_inputs(t, perm);
        if (cand.bits < best.table.bits) {
            best.table = cand;
            best.perm = perm;
        }
    }
    return best;
}

PatternFunction pattern_function(const DFSCode& code, const LabelTable& labels,
                                 const CellLibrary& lib) {
    const CodeGraph g = decode_code(code);
    const PatternShape shape = pattern_shape(code, labels);
    if (shape.inputs.size() > TruthTable::kMaxArity)
        throw Error("pattern_function: more than 6 pattern inputs");

    // Per class vertex: member node; per node vertex: input class per pin.
    std::vector<int> member(g.n, -1);
    std::vector<std::map<ELabel, std::uint32_t>> node_in(g.n);
    for (const auto& e : g.edges) {
        if (g.vlabel[e.from] == LabelTable::kClassLabel)
            member[e.from] = static_cast<int>(e.to);
        else
            node_in[e.from][e.label] = e.to;
    }
    std::map<std::uint32_t, std::uint32_t> input_pos;
    for (std::size_t i = 0; i < shape.inputs.size(); ++i)
        input_pos[shape.inputs[i]] = static_cast<std::uint32_t>(i);

    PatternFunction fn;
    fn.input_vertices = shape.inputs;
    fn.table.arity = static_cast<std::uint8_t>(shape.inputs.size());

    for (std::uint32_t row = 0; row < fn.table.rows(); ++row) {
        std::map<std::uint32_t, int> memo;  // class vertex -> value
        auto eval_class = [&](auto&& self, std::uint32_t v) -> bool {
            auto it = memo.find(v);
            if (it != memo.end()) return it->second;
            auto pos = input_pos.find(v);
            if (pos != input_pos.end()) {
                const bool val = (row >> pos->second) & 1u;
                memo[v] = val;
                return val;
            }
            const int n = member[v];
            if (n < 0) throw Error("pattern_function: unimplemented class vertex");
            const CellType* cell = lib.find(labels.vertex_name(g.vlabel[n]));
            if (!cell) throw Error("pattern_function: unknown cell label");
            std::uint32_t idx = 0;
            for (std::size_t i = 0; i < cell->inputs.size(); ++i) {
                const ELabel pin = labels.edge_label(cell->inputs[i]);
                const std::uint32_t child = node_in[n].at(pin);
                idx |= static_cast<std::uint32_t>(self(self, child)) << i;
            }
            const bool val = cell->function.eval(idx);
            memo[v] = val;
            return val;
        };
        if (eval_class(eval_class, shape.output_vertex)) fn.table.bits |= 1ull << row;
    }
    return fn;
}

std::vector<PatternGroup> group_by_function(const MineResult& mined,
                                            const PatternGraph& pg,
                                            const CellLibrary& lib) {
    std::map<std::pair<std::uint8_t, std::uint64_t>, PatternGroup> buckets;
    for (const auto& raw : mined.patterns) {
        const PatternFunction fn = pattern_function(raw.code, pg.labels, lib);
        const CanonicalFunction canon = canonicalize(fn.table);
        const PatternShape shape = pattern_shape(raw.code, pg.labels);
        auto& group = buckets[{canon.table.arity, canon.table.bits}];
        if (group.members.empty()) {
            group.function = canon;
            group.sop = quine_mccluskey(canon.table);
        }
        GroupMember m;
        m.code = raw.code;
        m.projections = raw.projections;
        m.support = raw.support;
        m.input_vertices = fn.input_vertices;
        m.output_vertex = shape.output_vertex;
        m.perm = canon.perm;
        m.gates = shape.gates;
        group.members.push_back(std::move(m));
    }
    std::vector<PatternGroup> groups;
    for (auto& [key, group] : buckets) {
        std::set<std::uint32_t> roots;
        for (const auto& m : group.members)
            for (const auto& p : m.projections) roots.insert(p.vmap[m.output_vertex]);
        group.support = static_cast<std::uint32_t>(roots.size());
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace celle
