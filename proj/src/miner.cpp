#include "celle/miner.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "celle/error.hpp"
#include "celle/log.hpp"

namespace celle {

int cmp_edge(const DfsEdge& a, const DfsEdge& b) {
    const bool af = a.forward();
    const bool bf = b.forward();
    if (af && bf) {
        if (a.j != b.j) return a.j < b.j ? -1 : 1;
        if (a.i != b.i) return a.i > b.i ? -1 : 1;  // deeper source first
    } else if (!af && !bf) {
        if (a.i != b.i) return a.i < b.i ? -1 : 1;
        if (a.j != b.j) return a.j < b.j ? -1 : 1;
    } else if (!af && bf) {
        return a.i < b.j ? -1 : 1;  // backward before forward from same spot
    } else {
        return a.j <= b.i ? -1 : 1;
    }
    if (a.li != b.li) return a.li < b.li ? -1 : 1;
    if (a.lij != b.lij) return a.lij < b.lij ? -1 : 1;
    if (a.lj != b.lj) return a.lj < b.lj ? -1 : 1;
    return 0;
}

int cmp_code(const DFSCode& a, const DFSCode& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const int c = cmp_edge(a[k], b[k]);
        if (c) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

std::string code_to_string(const DFSCode& code, const LabelTable& labels) {
    std::ostringstream out;
    for (const auto& e : code) {
        out << '(' << e.i << ',' << e.j << ',' << labels.vertex_name(e.li) << ','
            << labels.edge_name(e.lij) << ',' << labels.vertex_name(e.lj)
            << (e.host_fwd ? "" : ",rev") << ')';
    }
    return out.str();
}

CodeGraph decode_code(const DFSCode& code) {
    if (code.empty()) throw Error("miner: empty DFS code");
    if (code.size() > 64) throw Error("miner: DFS code too long");
    CodeGraph g;
    for (const auto& e : code) {
        g.n = std::max<std::uint32_t>(g.n, std::max(e.i, e.j) + 1);
    }
    g.vlabel.assign(g.n, 0xffff);
    auto set_label = [&](std::uint32_t v, VLabel l) {
        if (g.vlabel[v] == 0xffff)
            g.vlabel[v] = l;
        else if (g.vlabel[v] != l)
            throw Error("miner: inconsistent vertex labels in DFS code");
    };
    for (const auto& e : code) {
        set_label(e.i, e.li);
        set_label(e.j, e.lj);
        if (e.host_fwd)
            g.edges.push_back({e.i, e.j, e.lij});
        else
            g.edges.push_back({e.j, e.i, e.lij});
    }
    for (auto l : g.vlabel)
        if (l == 0xffff) throw Error("miner: DFS code skips a vertex index");
    return g;
}

namespace {

// Rightmost path of a code, root first, rebuilt by replaying forward
// edges.
std::vector<std::uint32_t> rightmost_path(const DFSCode& code) {
    std::vector<std::uint32_t> rm{0};
    for (const auto& e : code) {
        if (!e.forward()) continue;
        while (!rm.empty() && rm.back() != e.i) rm.pop_back();
        if (rm.empty()) throw Error("miner: malformed DFS code (forward edge off path)");
        rm.push_back(e.j);
    }
    return rm;
}

struct Analysis {
    CodeGraph g;
    std::vector<std::uint32_t> in_deg, out_deg;
    std::vector<bool> is_class;
    std::vector<int> member_node;  // per class vertex: node vertex or -1
    std::uint32_t gates = 0;
    bool cycle = false;
};

Analysis analyze(const DFSCode& code, const LabelTable& labels) {
    Analysis a;
    a.g = decode_code(code);
    a.in_deg.assign(a.g.n, 0);
    a.out_deg.assign(a.g.n, 0);
    a.is_class.resize(a.g.n);
    a.member_node.assign(a.g.n, -1);
    for (std::uint32_t v = 0; v < a.g.n; ++v)
        a.is_class[v] = a.g.vlabel[v] == LabelTable::kClassLabel;
    for (const auto& e : a.g.edges) {
        ++a.out_deg[e.from];
        ++a.in_deg[e.to];
        if (a.is_class[e.from] && !a.is_class[e.to]) {
            if (a.member_node[e.from] < 0) a.member_node[e.from] = static_cast<int>(e.to);
        }
        if (a.is_class[e.from] == a.is_class[e.to])
            throw Error("miner: DFS code is not bipartite");
    }
    for (std::uint32_t v = 0; v < a.g.n; ++v)
        if (!a.is_class[v] && !labels.is_input_label(a.g.vlabel[v])) ++a.gates;

    // Directed cycle detection (colors: 0 new, 1 active, 2 done).
    std::vector<std::vector<std::uint32_t>> adj(a.g.n);
    for (const auto& e : a.g.edges) adj[e.from].push_back(e.to);
    std::vector<int> color(a.g.n, 0);
    for (std::uint32_t start = 0; start < a.g.n && !a.cycle; ++start) {
        if (color[start]) continue;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty() && !a.cycle) {
            auto& [v, idx] = stack.back();
            if (idx < adj[v].size()) {
                const std::uint32_t w = adj[v][idx++];
                if (color[w] == 1) {
                    a.cycle = true;
                } else if (color[w] == 0) {
                    color[w] = 1;
                    stack.push_back({w, 0});
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return a;
}

bool connected(const CodeGraph& g) {
    if (g.n == 0) return false;
    std::vector<std::vector<std::uint32_t>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    std::vector<bool> seen(g.n, false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == g.n;
}

}  // namespace

namespace {

bool illegal_impl(const Analysis& a, const DFSCode& code, const MiningParams& params) {
    // (a) a class picked two member nodes; uniqueness can never recover.
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (!a.is_class[v]) continue;
        if (a.out_deg[v] > 1) return true;
    }
    // (b) over the gate budget.
    if (a.gates > params.max_gates) return true;
    // (c) chosen gates form a directed cycle.
    if (a.cycle) return true;
    // (d) two implemented, unconsumed classes off the rightmost path can
    // both never be consumed again: two outputs forever.
    const auto rm = rightmost_path(code);
    std::uint32_t closed = 0;
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (!a.is_class[v] || a.in_deg[v] != 0 || a.out_deg[v] == 0) continue;
        if (std::find(rm.begin(), rm.end(), v) == rm.end()) ++closed;
    }
    return closed >= 2;
}

}  // namespace

bool is_illegal(const DFSCode& code, const LabelTable& labels, const MiningParams& params) {
    return illegal_impl(analyze(code, labels), code, params);
}

bool satisfies_constraints(const DFSCode& code, const LabelTable& labels,
                           const MiningParams& params) {
    Analysis a;
    try {
        a = analyze(code, labels);
    } catch (const Error&) {
        return false;
    }
    if (!connected(a.g) || a.cycle) return false;

    // Input pseudo-cells stay outside patterns; their classes are
    // matched as SI boundary vertices instead.
    for (std::uint32_t v = 0; v < a.g.n; ++v)
        if (!a.is_class[v] && labels.is_input_label(a.g.vlabel[v])) return false;

    // Source-sink + completeness at gate level: each node vertex owns
    // exactly one member edge and all of its input pins.
    std::vector<std::set<ELabel>> node_out_pins(a.g.n);
    for (const auto& e : a.g.edges) {
        if (a.is_class[e.from]) {
            // member edge: label must be the node's output pin
            if (labels.output_pin(a.g.vlabel[e.to]) != e.label) return false;
        } else {
            if (!node_out_pins[e.from].insert(e.label).second) return false;
        }
    }
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (a.is_class[v]) {
            if (a.out_deg[v] > 1) return false;  // uniqueness
        } else {
            if (a.in_deg[v] != 1) return false;
            const VLabel l = a.g.vlabel[v];
            const auto& pins = labels.input_pins(l);
            if (node_out_pins[v].size() != pins.size() || a.out_deg[v] != pins.size())
                return false;
            for (auto p : pins)
                if (!node_out_pins[v].count(p)) return false;
        }
    }
    // Single output: exactly one unconsumed class, implemented by a gate.
    std::uint32_t outputs = 0;
    std::uint32_t output_vertex = 0;
    std::uint32_t si = 0;
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (!a.is_class[v]) continue;
        if (a.in_deg[v] == 0) {
            ++outputs;
            output_vertex = v;
        }
        if (a.out_deg[v] == 0) ++si;
    }
    if (outputs != 1) return false;
    if (a.member_node[output_vertex] < 0) return false;
    if (si > params.max_inputs) return false;
    if (a.gates < 1 || a.gates > params.max_gates) return false;
    return true;
}

PatternShape pattern_shape(const DFSCode& code, const LabelTable& labels) {
    const Analysis a = analyze(code, labels);
    PatternShape shape;
    shape.gates = a.gates;
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (!a.is_class[v]) continue;
        if (a.in_deg[v] == 0 && a.out_deg[v] > 0) shape.output_vertex = v;
        if (a.out_deg[v] == 0) shape.inputs.push_back(v);
    }
    return shape;
}

// ---------------------------------------------------------------------------
// Minimal DFS code by greedy construction over all embeddings. When
// `reference` is given the construction stops at the first position
// where the minimum diverges from it (early non-minimality exit).

namespace {

bool min_code_impl(const CodeGraph& g, DFSCode& code, const DFSCode* reference) {
    struct Emb {
        std::vector<std::uint32_t> map;  // pattern vertex -> g vertex
        std::uint64_t used = 0;          // g edge indices consumed
    };
    std::vector<std::vector<std::uint32_t>> incident(g.n);
    for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
        incident[g.edges[e].from].push_back(e);
        if (g.edges[e].to != g.edges[e].from) incident[g.edges[e].to].push_back(e);
    }

    std::vector<Emb> embs;
    // Seed: minimal 1-edge code over all edges and orientations.
    std::optional<DfsEdge> best;
    for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
        const auto& edge = g.edges[e];
        for (int orientation = 0; orientation < 2; ++orientation) {
            const std::uint32_t v0 = orientation == 0 ? edge.from : edge.to;
            const std::uint32_t v1 = orientation == 0 ? edge.to : edge.from;
            const DfsEdge cand{0, 1, g.vlabel[v0], edge.label, g.vlabel[v1],
                               orientation == 0};
            if (!best || cmp_edge(cand, *best) < 0) {
                best = cand;
                embs.clear();
            }
            if (cmp_edge(cand, *best) == 0) embs.push_back({{v0, v1}, 1ull << e});
        }
    }
    if (!best) throw Error("miner: empty pattern graph");
    code.push_back(*best);
    if (reference && !(*best == (*reference)[0])) return false;
    std::vector<std::uint32_t> rm{0, 1};

    while (code.size() < g.edges.size()) {
        struct Real {
            std::size_t emb;
            std::uint32_t edge;
            std::uint32_t new_host;  // forward only
        };
        std::optional<DfsEdge> cand_best;
        std::vector<Real> reals;
        const std::uint32_t r = rm.back();
        std::uint32_t next_idx = 0;
        for (const auto& e : code)
            next_idx = std::max<std::uint32_t>(next_idx, std::max(e.i, e.j) + 1);
        auto consider = [&](const DfsEdge& cand, Real real) {
            if (!cand_best || cmp_edge(cand, *cand_best) < 0) {
                cand_best = cand;
                reals.clear();
            }
            if (cmp_edge(cand, *cand_best) == 0) reals.push_back(real);
        };
        for (std::size_t ei = 0; ei < embs.size(); ++ei) {
            const Emb& emb = embs[ei];
            // Backward: rightmost vertex to an earlier rightmost-path vertex.
            for (std::size_t k = 0; k + 1 < rm.size(); ++k) {
                const std::uint32_t u = rm[k];
                for (auto e : incident[emb.map[r]]) {
                    if (emb.used & (1ull << e)) continue;
                    const auto& edge = g.edges[e];
                    const std::uint32_t other =
                        edge.from == emb.map[r] ? edge.to : edge.from;
                    if (other != emb.map[u]) continue;
                    const DfsEdge cand{static_cast<std::uint16_t>(r),
                                       static_cast<std::uint16_t>(u),
                                       g.vlabel[emb.map[r]],
                                       edge.label,
                                       g.vlabel[emb.map[u]],
                                       edge.from == emb.map[r]};
                    consider(cand, {ei, e, 0});
                }
            }
            // Forward: any rightmost-path vertex to a fresh vertex.
            for (auto u : rm) {
                for (auto e : incident[emb.map[u]]) {
                    if (emb.used & (1ull << e)) continue;
                    const auto& edge = g.edges[e];
                    const std::uint32_t other =
                        edge.from == emb.map[u] ? edge.to : edge.from;
                    if (std::find(emb.map.begin(), emb.map.end(), other) != emb.map.end())
                        continue;
                    const DfsEdge cand{static_cast<std::uint16_t>(u),
                                       static_cast<std::uint16_t>(next_idx),
                                       g.vlabel[emb.map[u]],
                                       edge.label,
                                       g.vlabel[other],
                                       edge.from == emb.map[u]};
                    consider(cand, {ei, e, other});
                }
            }
        }
        if (!cand_best) throw Error("miner: disconnected pattern graph");
        code.push_back(*cand_best);
        if (reference && !(*cand_best == (*reference)[code.size() - 1])) return false;
        std::vector<Emb> next;
        next.reserve(reals.size());
        for (const auto& real : reals) {
            Emb emb = embs[real.emb];
            emb.used |= 1ull << real.edge;
            if (cand_best->forward()) emb.map.push_back(real.new_host);
            next.push_back(std::move(emb));
        }
        embs = std::move(next);
        if (cand_best->forward()) {
            while (!rm.empty() && rm.back() != cand_best->i) rm.pop_back();
            rm.push_back(cand_best->j);
        }
    }
    return true;
}

}  // namespace

DFSCode min_dfs_code(const CodeGraph& g) {
    DFSCode code;
    min_code_impl(g, code, nullptr);
    return code;
}

bool is_minimal(const DFSCode& code) {
    const CodeGraph g = decode_code(code);
    DFSCode built;
    built.reserve(code.size());
    return min_code_impl(g, built, &code);
}

// ---------------------------------------------------------------------------
// Mining.

namespace {

// Edge key ordering for extension buckets: DFS-lexicographic, then the
// host direction (never actually tied, labels pin the direction).
struct EdgeKeyLess {
    bool operator()(const DfsEdge& a, const DfsEdge& b) const {
        const int c = cmp_edge(a, b);
        if (c) return c < 0;
        return a.host_fwd < b.host_fwd;
    }
};

// Candidate-output image bound: distinct images over projections,
// maximized across all vertices that can still become the output
// (unconsumed classes; owning classes of nodes lacking a member edge).
std::uint32_t support_bound(const DFSCode& code, const LabelTable& labels,
                            const PatternGraph& pg,
                            const std::vector<Projection>& projections) {
    const Analysis a = analyze(code, labels);
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        std::set<std::uint32_t> images;
        if (a.is_class[v]) {
            if (a.in_deg[v] != 0) continue;
            for (const auto& p : projections) images.insert(p.vmap[v]);
        } else {
            if (a.in_deg[v] != 0) continue;  // member edge already chosen
            for (const auto& p : projections) images.insert(pg.owner_class(p.vmap[v]));
        }
        best = std::max<std::uint32_t>(best, static_cast<std::uint32_t>(images.size()));
    }
    return best;
}

std::uint32_t output_support(const DFSCode& code, const LabelTable& labels,
                             const std::vector<Projection>& projections) {
    const PatternShape shape = pattern_shape(code, labels);
    std::set<std::uint32_t> images;
    for (const auto& p : projections) images.insert(p.vmap[shape.output_vertex]);
    return static_cast<std::uint32_t>(images.size());
}

}  // namespace

std::vector<std::pair<DFSCode, std::vector<Projection>>> find_frequent_1edge(
    const PatternGraph& pg, std::uint32_t min_support) {
    std::map<DfsEdge, std::vector<Projection>, EdgeKeyLess> buckets;
    for (const auto& e : pg.edges) {
        const bool from_class = pg.is_class_vertex(e.from);
        const std::uint32_t class_v = from_class ? e.from : e.to;
        const std::uint32_t node_v = from_class ? e.to : e.from;
        if (pg.labels.is_input_label(pg.vlabel[node_v])) continue;
        const DfsEdge key{0, 1, LabelTable::kClassLabel, e.label, pg.vlabel[node_v],
                          from_class};
        buckets[key].push_back({{class_v, node_v}});
    }
    std::vector<std::pair<DFSCode, std::vector<Projection>>> out;
    for (auto& [key, projs] : buckets) {
        const DFSCode code{key};
        if (support_bound(code, pg.labels, pg, projs) < min_support) continue;
        out.emplace_back(code, std::move(projs));
    }
    return out;
}

namespace {

// Lazy extension: references into the parent projection list instead of
// materialized child projections (most children are pruned before their
// projections are ever needed).
struct ExtensionRef {
    std::uint32_t parent;                       // parent projection index
    std::uint32_t new_host = 0xffffffffu;       // forward edges only
};
struct Extension {
    DfsEdge edge;
    std::vector<ExtensionRef> refs;
};

std::uint64_t pack_edge(const DfsEdge& e) {
    return (static_cast<std::uint64_t>(e.i) << 48) |
           (static_cast<std::uint64_t>(e.j) << 32) |
           (static_cast<std::uint64_t>(e.li) << 22) |
           (static_cast<std::uint64_t>(e.lij) << 12) |
           (static_cast<std::uint64_t>(e.lj) << 2) | (e.host_fwd ? 1 : 0);
}

std::vector<Extension> enumerate_extensions(const PatternGraph& pg, const DFSCode& code,
                                            const std::vector<Projection>& projections) {
    const auto rm = rightmost_path(code);
    const std::uint32_t r = rm.back();
    std::uint32_t next_idx = 0;
    for (const auto& e : code)
        next_idx = std::max<std::uint32_t>(next_idx, std::max(e.i, e.j) + 1);

    // The pin label identifies the host edge between a vertex pair, so a
    // backward extension may not re-add an edge the pattern already has
    // (under either (i, j) orientation).
    auto pattern_has = [&](std::uint32_t x, std::uint32_t y, ELabel l) {
        for (const auto& e : code)
            if (e.lij == l && ((e.i == x && e.j == y) || (e.i == y && e.j == x)))
                return true;
        return false;
    };

    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<Extension> buckets;
    auto bucket_for = [&](const DfsEdge& key) -> Extension& {
        auto [it, fresh] = index.emplace(pack_edge(key), buckets.size());
        if (fresh) buckets.push_back({key, {}});
        return buckets[it->second];
    };

    for (std::uint32_t pi = 0; pi < projections.size(); ++pi) {
        const Projection& p = projections[pi];
        // Backward from the rightmost vertex to rightmost-path vertices.
        for (std::size_t k = 0; k + 1 < rm.size(); ++k) {
            const std::uint32_t u = rm[k];
            const std::uint32_t hr = p.vmap[r];
            const std::uint32_t hu = p.vmap[u];
            for (auto dir : {true, false}) {
                const auto& pool = dir ? pg.out_edges[hr] : pg.in_edges[hr];
                for (auto ei : pool) {
                    const PGEdge& he = pg.edges[ei];
                    const std::uint32_t other = dir ? he.to : he.from;
                    if (other != hu) continue;
                    if (pattern_has(static_cast<std::uint32_t>(r), u, he.label)) continue;
                    const DfsEdge key{static_cast<std::uint16_t>(r),
                                      static_cast<std::uint16_t>(u),
                                      pg.vlabel[hr],
                                      he.label,
                                      pg.vlabel[hu],
                                      dir};
                    bucket_for(key).refs.push_back({pi, 0xffffffffu});
                }
            }
        }
        // Forward from every rightmost-path vertex to a fresh host vertex.
        for (auto u : rm) {
            const std::uint32_t hu = p.vmap[u];
            for (auto dir : {true, false}) {
                const auto& pool = dir ? pg.out_edges[hu] : pg.in_edges[hu];
                for (auto ei : pool) {
                    const PGEdge& he = pg.edges[ei];
                    const std::uint32_t other = dir ? he.to : he.from;
                    if (!pg.is_class_vertex(other) &&
                        pg.labels.is_input_label(pg.vlabel[other]))
                        continue;  // PI leaves stay behind SI classes
                    if (std::find(p.vmap.begin(), p.vmap.end(), other) != p.vmap.end())
                        continue;
                    const DfsEdge key{static_cast<std::uint16_t>(u),
                                      static_cast<std::uint16_t>(next_idx),
                                      pg.vlabel[hu],
                                      he.label,
                                      pg.vlabel[other],
                                      dir};
                    bucket_for(key).refs.push_back({pi, other});
                }
            }
        }
    }
    std::sort(buckets.begin(), buckets.end(), [](const Extension& a, const Extension& b) {
        const int c = cmp_edge(a.edge, b.edge);
        return c ? c < 0 : a.edge.host_fwd < b.edge.host_fwd;
    });
    return buckets;
}

std::vector<Projection> materialize(const std::vector<Projection>& parents,
                                    const std::vector<ExtensionRef>& refs) {
    std::vector<Projection> out;
    out.reserve(refs.size());
    for (const auto& ref : refs) {
        Projection p = parents[ref.parent];
        if (ref.new_host != 0xffffffffu) p.vmap.push_back(ref.new_host);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::vector<std::pair<DFSCode, std::vector<Projection>>> find_extensions(
    const PatternGraph& pg, std::uint32_t min_support, const DFSCode& code,
    const std::vector<Projection>& projections) {
    std::vector<std::pair<DFSCode, std::vector<Projection>>> out;
    for (const auto& ext : enumerate_extensions(pg, code, projections)) {
        DFSCode child = code;
        child.push_back(ext.edge);
        std::vector<Projection> projs = materialize(projections, ext.refs);
        if (min_support > 1 &&
            support_bound(child, pg.labels, pg, projs) < min_support)
            continue;
        out.emplace_back(std::move(child), std::move(projs));
    }
    return out;
}

namespace {

// Upward host reachability: up_reach[c] marks every class vertex whose
// implementation can sit above class vertex c within max_gates gate
// steps. Used to discard projections whose open outputs can never end
// up under a single final output.
struct UpReach {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;  // n_class_vertices rows

    const std::uint64_t* row(std::uint32_t c) const { return bits.data() + c * words; }
};

UpReach build_up_reach(const PatternGraph& pg, std::uint32_t max_steps) {
    const std::size_t n = pg.n_class_vertices;
    UpReach r;
    r.words = (n + 63) / 64;
    r.bits.assign(n * r.words, 0);
    std::vector<std::vector<std::uint32_t>> up(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        for (auto ei : pg.in_edges[c]) {
            const std::uint32_t node = pg.edges[ei].from;
            up[c].push_back(pg.owner_class(node));
        }
    }
    for (std::uint32_t c = 0; c < n; ++c) {
        std::uint64_t* row = r.bits.data() + c * r.words;
        row[c / 64] |= 1ull << (c % 64);
        std::vector<std::uint32_t> frontier{c};
        std::vector<bool> seen(n, false);
        seen[c] = true;
        for (std::uint32_t step = 0; step < max_steps && !frontier.empty(); ++step) {
            std::vector<std::uint32_t> next;
            for (auto x : frontier) {
                for (auto y : up[x]) {
                    if (seen[y]) continue;
                    seen[y] = true;
                    row[y / 64] |= 1ull << (y % 64);
                    next.push_back(y);
                }
            }
            frontier = std::move(next);
        }
    }
    return r;
}

struct MineState {
    const PatternGraph& pg;
    const MiningParams& params;
    MineResult result;
    UpReach reach;
    std::size_t visited = 0;
    std::size_t minimal = 0;
};

// Structural prunes beyond is_illegal, all based on the fact that
// vertices off the rightmost path never gain another incident edge:
// incomplete gates there can never pick up their missing pins, and
// unimplemented classes there stay pattern inputs forever.
bool prune_branch(const Analysis& a, const DFSCode& code, const LabelTable& labels,
                  const MiningParams& params) {
    const auto rm = rightmost_path(code);
    auto off_path = [&](std::uint32_t v) {
        return std::find(rm.begin(), rm.end(), v) == rm.end();
    };
    std::uint32_t permanent_si = 0;
    for (std::uint32_t v = 0; v < a.g.n; ++v) {
        if (a.is_class[v]) {
            if (a.out_deg[v] == 0 && off_path(v)) ++permanent_si;
        } else if (off_path(v)) {
            if (a.in_deg[v] != 1) return true;  // member edge unreachable
            if (a.out_deg[v] != labels.arity(a.g.vlabel[v])) return true;
        }
    }
    return permanent_si > params.max_inputs;
}

// Entered only with codes that already passed the structural checks and
// the canonicality test; `projections` is the full materialized list.
void subgraph_mining(MineState& st, const DFSCode& code, const Analysis& a,
                     std::vector<Projection>&& projections,
                     std::optional<std::uint32_t> parent_support) {
    if (st.result.truncated) return;
    ++st.minimal;

    // Projections whose open outputs have no common host ancestor within
    // the gate budget cannot complete to a single-output subcircuit.
    std::vector<std::uint32_t> opens;
    for (std::uint32_t v = 0; v < a.g.n; ++v)
        if (a.is_class[v] && a.in_deg[v] == 0 && a.out_deg[v] > 0) opens.push_back(v);
    if (opens.size() >= 2) {
        std::vector<Projection> joinable;
        joinable.reserve(projections.size());
        for (auto& p : projections) {
            bool ok = true;
            for (std::size_t w = 0; w < st.reach.words && ok; ++w) {
                std::uint64_t common = ~0ull;
                for (auto v : opens) common &= st.reach.row(p.vmap[v])[w];
                if (common) break;  // shared ancestor found in this word
                if (w + 1 == st.reach.words) ok = false;
            }
            if (ok) joinable.push_back(std::move(p));
        }
        projections = std::move(joinable);
        if (projections.empty()) return;
    }

    std::optional<std::uint32_t> valid_support;
    if (satisfies_constraints(code, st.pg.labels, st.params)) {
        const std::uint32_t support = output_support(code, st.pg.labels, projections);
        valid_support = support;
        // Anti-monotone on the output class across one-edge valid
        // extensions (the only such step adds an input witness).
        assert(!parent_support || support <= *parent_support);
        (void)parent_support;
        if (support >= st.params.min_support) {
            if (st.result.patterns.size() >= st.params.max_patterns) {
                st.result.truncated = true;
                return;
            }
            st.result.patterns.push_back({code, projections, support});
        }
    }

    // Growth is purely structural; the support threshold applies at
    // emission so the mined set matches exhaustive enumeration. Child
    // projections are materialized only after the cheap code-level
    // checks and the canonicality test passed.
    for (const auto& ext : enumerate_extensions(st.pg, code, projections)) {
        if (st.result.truncated) return;
        ++st.visited;
        DFSCode child = code;
        child.push_back(ext.edge);
        const Analysis ca = analyze(child, st.pg.labels);
        if (illegal_impl(ca, child, st.params)) continue;
        if (prune_branch(ca, child, st.pg.labels, st.params)) continue;
        if (!is_minimal(child)) continue;
        subgraph_mining(st, child, ca, materialize(projections, ext.refs),
                        valid_support);
    }
}

}  // namespace

MineResult mine(const PatternGraph& pg, const MiningParams& params) {
    MineState st{pg, params, {}, build_up_reach(pg, params.max_gates), 0, 0};
    for (auto& [code, projs] : find_frequent_1edge(pg, 1)) {
        ++st.visited;
        const Analysis a = analyze(code, pg.labels);
        if (illegal_impl(a, code, params)) continue;
        if (prune_branch(a, code, pg.labels, params)) continue;
        if (!is_minimal(code)) continue;
        subgraph_mining(st, code, a, std::move(projs), std::nullopt);
    }
    log(LogLevel::kDebug, "mine: visited " + std::to_string(st.visited) +
                              " codes, " + std::to_string(st.minimal) + " minimal, " +
                              std::to_string(st.result.patterns.size()) + " emitted");
    std::sort(st.result.patterns.begin(), st.result.patterns.end(),
              [](const PatternGroupRaw& a, const PatternGroupRaw& b) {
                  return cmp_code(a.code, b.code) < 0;
              });
    return std::move(st.result);
}

std::string serialize_patterns(const MineResult& result, const PatternGraph& pg) {
    nlohmann::ordered_json doc;
    doc["truncated"] = result.truncated;
    doc["patterns"] = nlohmann::ordered_json::array();
    for (const auto& p : result.patterns) {
        nlohmann::ordered_json jp;
        nlohmann::ordered_json code = nlohmann::ordered_json::array();
        for (const auto& e : p.code) {
            code.push_back({e.i, e.j, pg.labels.vertex_name(e.li),
                            pg.labels.edge_name(e.lij), pg.labels.vertex_name(e.lj)});
        }
        jp["code"] = std::move(code);
        jp["support"] = p.support;
        const PatternShape shape = pattern_shape(p.code, pg.labels);
        jp["gates"] = shape.gates;
        jp["inputs"] = shape.inputs.size();
        jp["projections"] = p.projections.size();
        nlohmann::ordered_json sample = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < std::min<std::size_t>(10, p.projections.size()); ++k)
            sample.push_back(p.projections[k].vmap);
        jp["projections_sample"] = std::move(sample);
        doc["patterns"].push_back(std::move(jp));
    }
    return doc.dump(2) + "\n";
}

}  // namespace celle
