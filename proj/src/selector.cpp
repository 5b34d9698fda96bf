#include "celle/selector.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <set>

#include "celle/error.hpp"

namespace celle {

int transistor_count(const MinimizedSOP& sop) {
    const int literals = sop.total_literals();
    if (sop.cubes.empty() || (sop.cubes.size() == 1 && sop.cubes[0].mask == 0))
        throw Error("area model: constant function has no gate realization");
    return 2 * literals + (sop.all_negative() ? 0 : 2);
}

double fit_area_beta(const CellLibrary& lib) {
    double num = 0.0;
    double den = 0.0;
    std::size_t cells = 0;
    for (auto idx : lib.real_cells()) {
        const CellType& c = lib.at(idx);
        const int t = transistor_count(quine_mccluskey(c.function));
        num += t * c.area;
        den += static_cast<double>(t) * t;
        ++cells;
    }
    if (cells < 2 || den == 0.0)
        throw Error("area model: need at least 2 base cells to fit beta");
    return num / den;
}

double estimate_cell_area(const MinimizedSOP& sop, const CellLibrary& lib) {
    return fit_area_beta(lib) * transistor_count(sop);
}

namespace {

std::string hex_bits(const TruthTable& t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llX", static_cast<unsigned long long>(t.bits));
    return buf;
}

}  // namespace

std::vector<CandidateCell> make_candidates(const std::vector<PatternGroup>& groups,
                                           const CellLibrary& lib,
                                           std::uint32_t max_inputs,
                                           std::uint32_t max_gates) {
    // Canonical functions the base library already offers.
    std::set<std::pair<std::uint8_t, std::uint64_t>> known;
    for (auto idx : lib.real_cells()) {
        const CanonicalFunction c = canonicalize(lib.at(idx).function);
        known.insert({c.table.arity, c.table.bits});
    }
    const double beta = fit_area_beta(lib);

    std::vector<CandidateCell> out;
    for (const auto& group : groups) {
        const TruthTable& t = group.function.table;
        if (t.arity == 0) continue;
        const std::uint64_t masked = t.bits & t.row_mask();
        if (masked == 0 || masked == t.row_mask()) continue;  // constant
        if (known.count({t.arity, t.bits})) continue;         // base cell exists
        if (t.arity > max_inputs) continue;
        bool sized = true;
        for (const auto& m : group.members)
            if (m.gates > max_gates) sized = false;
        if (!sized) continue;
        CandidateCell cand;
        cand.function = group.function;
        cand.sop = group.sop;
        cand.group = group;
        cand.est_area = beta * transistor_count(group.sop);
        cand.name = "CX" + std::to_string(t.arity) + "_" + hex_bits(t);
        out.push_back(std::move(cand));
    }
    return out;
}

std::shared_ptr<CellLibrary> ExtendedLibrary::materialize() const {
    auto lib = std::make_shared<CellLibrary>();
    for (auto idx : base->real_cells()) lib->add_cell(base->at(idx));
    static const char* kPins = "ABCDEF";
    for (const auto& c : extensions) {
        CellType cell;
        cell.name = c.name;
        for (std::uint8_t i = 0; i < c.function.table.arity; ++i)
            cell.inputs.push_back(std::string(1, kPins[i]));
        cell.output = "Y";
        cell.area = c.est_area;
        cell.function = c.function.table;
        lib->add_cell(std::move(cell));
    }
    return lib;
}

namespace {

struct CompositeImpl {
    double est_area;
    std::vector<EClassId> si_classes;  // canonical pin order
    std::uint32_t cell_index;          // into ext.extensions
};

struct ClassImpls {
    std::vector<ENodeId> nodes;            // base implementations
    std::vector<CompositeImpl> composites;
};

constexpr double kInf = 1e300;

}  // namespace

EvalResult evaluate_extension(const EGraph& g, const PatternGraph& pg,
                              const ExtendedLibrary& ext) {
    const CellLibrary& base = *ext.base;

    // Gather implementations per canonical class.
    std::map<EClassId, ClassImpls> impls;
    for (EClassId cls : g.classes())
        impls[cls].nodes = g.members(cls);

    for (std::uint32_t ci = 0; ci < ext.extensions.size(); ++ci) {
        const CandidateCell& cand = ext.extensions[ci];
        for (const auto& member : cand.group.members) {
            std::set<std::pair<EClassId, std::vector<EClassId>>> seen;
            for (const auto& proj : member.projections) {
                const EClassId root =
                    pg.origin_class.at(proj.vmap.at(member.output_vertex));
                std::vector<EClassId> si;
                si.reserve(member.input_vertices.size());
                // Canonical pin i is fed by member input perm[i].
                for (std::size_t i = 0; i < member.input_vertices.size(); ++i) {
                    const std::uint32_t member_pos = member.perm[i];
                    const std::uint32_t pat_vertex = member.input_vertices[member_pos];
                    si.push_back(pg.origin_class.at(proj.vmap.at(pat_vertex)));
                }
                if (!seen.insert({root, si}).second) continue;
                impls[root].composites.push_back({cand.est_area, std::move(si), ci});
            }
        }
    }

    // Fixpoint relaxation of class costs (monotone non-increasing).
    std::map<EClassId, double> cost;
    for (const auto& [cls, _] : impls) cost[cls] = kInf;
    auto node_cost = [&](ENodeId n) {
        const ENode& node = g.node(n);
        double c = g.is_input_op(node.op) ? 0.0 : base.at(node.op).area;
        for (auto ch : node.children) {
            const double cc = cost.at(g.find(ch));
            if (cc >= kInf) return kInf;
            c += cc;
        }
        return c;
    };
    auto composite_cost = [&](const CompositeImpl& impl) {
        double c = impl.est_area;
        for (auto si : impl.si_classes) {
            const double cc = cost.at(g.find(si));
            if (cc >= kInf) return kInf;
            c += cc;
        }
        return c;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [cls, ci] : impls) {
            double best = cost[cls];
            for (auto n : ci.nodes) best = std::min(best, node_cost(n));
            for (const auto& comp : ci.composites) best = std::min(best, composite_cost(comp));
            if (best < cost[cls]) {
                cost[cls] = best;
                changed = true;
            }
        }
    }

    // Deterministic choice per class: lowest-cost, base nodes (ascending
    // id) before composites (registration order) on ties.
    struct Choice {
        bool composite = false;
        ENodeId node = 0;
        const CompositeImpl* comp = nullptr;
    };
    std::map<EClassId, Choice> choice;
    for (auto& [cls, ci] : impls) {
        if (cost[cls] >= kInf) continue;
        bool done = false;
        for (auto n : ci.nodes) {
            if (node_cost(n) <= cost[cls]) {
                choice[cls] = {false, n, nullptr};
                done = true;
                break;
            }
        }
        if (done) continue;
        for (const auto& comp : ci.composites) {
            if (composite_cost(comp) <= cost[cls]) {
                choice[cls] = {true, 0, &comp};
                break;
            }
        }
    }

    // Collect classes needed from the PO roots, counting each once.
    std::set<EClassId> needed;
    std::vector<EClassId> stack;
    EvalResult result;
    for (const auto& [po, root] : g.roots) {
        const EClassId cls = g.find(root);
        result.per_root_cost[po] = cost.count(cls) ? cost.at(cls) : kInf;
        stack.push_back(cls);
    }
    while (!stack.empty()) {
        const EClassId cls = g.find(stack.back());
        stack.pop_back();
        if (!needed.insert(cls).second) continue;
        auto it = choice.find(cls);
        if (it == choice.end()) throw Error("evaluate_extension: no implementation for class");
        if (it->second.composite) {
            for (auto si : it->second.comp->si_classes) stack.push_back(g.find(si));
        } else {
            for (auto ch : g.node(it->second.node).children) stack.push_back(g.find(ch));
        }
    }

    // Emit the rewritten netlist over the materialized library.
    result.lib = ext.materialize();
    Netlist& nl = result.netlist;
    nl.lib = result.lib.get();
    std::map<EClassId, std::string> net_of;
    for (const auto& [pi, cls] : g.leaves) net_of[g.find(cls)] = pi;
    for (EClassId cls : needed) {
        if (!net_of.count(cls)) net_of[cls] = "n" + std::to_string(cls);
    }
    for (EClassId cls : needed) {
        const Choice& ch = choice.at(cls);
        if (!ch.composite && g.is_input_op(g.node(ch.node).op)) continue;
        Gate gate;
        gate.id = "g" + std::to_string(cls);
        gate.output_net = net_of.at(cls);
        if (ch.composite) {
            const std::string& cell_name = ext.extensions[ch.comp->cell_index].name;
            gate.cell = result.lib->index_of(cell_name);
            ++result.cell_uses[cell_name];
            for (auto si : ch.comp->si_classes)
                gate.input_nets.push_back(net_of.at(g.find(si)));
        } else {
            const ENode& node = g.node(ch.node);
            gate.cell = result.lib->index_of(base.at(node.op).name);
            for (auto c : node.children) gate.input_nets.push_back(net_of.at(g.find(c)));
        }
        result.area += result.lib->at(gate.cell).area;
        ++result.gates;
        nl.gates.push_back(std::move(gate));
    }
    for (const auto& [pi, cls] : g.leaves) nl.pis.push_back(pi);
    for (const auto& [po, root] : g.roots) nl.pos.push_back(net_of.at(g.find(root)));
    nl.validate();
    return result;
}

ExtendedLibrary select_cells(const std::vector<CandidateCell>& candidates,
                             std::uint32_t budget, const EGraph& g,
                             const PatternGraph& pg, const CellLibrary& base,
                             bool exhaustive) {
    ExtendedLibrary chosen{&base, {}};
    if (budget == 0 || candidates.empty()) return chosen;

    auto eval_area = [&](const std::vector<CandidateCell>& exts) {
        ExtendedLibrary trial{&base, exts};
        return evaluate_extension(g, pg, trial).area;
    };

    if (exhaustive) {
        if (candidates.size() > 15)
            throw Error("select_cells: exhaustive search limited to 15 candidates");
        double best_area = eval_area({});
        std::vector<CandidateCell> best_set;
        const std::uint32_t n = static_cast<std::uint32_t>(candidates.size());
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (static_cast<std::uint32_t>(std::popcount(mask)) > budget) continue;
            std::vector<CandidateCell> exts;
            for (std::uint32_t i = 0; i < n; ++i)
                if (mask & (1u << i)) exts.push_back(candidates[i]);
            const double area = eval_area(exts);
            if (area < best_area ||
                (area == best_area && exts.size() < best_set.size())) {
                best_area = area;
                best_set = std::move(exts);
            }
        }
        chosen.extensions = std::move(best_set);
        return chosen;
    }

    std::vector<const CandidateCell*> remaining;
    for (const auto& c : candidates) remaining.push_back(&c);
    double current = eval_area({});
    while (chosen.extensions.size() < budget && !remaining.empty()) {
        const CandidateCell* best = nullptr;
        double best_gain = 0.0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            auto trial = chosen.extensions;
            trial.push_back(*remaining[i]);
            const double gain = current - eval_area(trial);
            const bool better =
                gain > best_gain ||
                (best && gain == best_gain &&
                 std::make_tuple(-static_cast<int>(remaining[i]->group.support),
                                 remaining[i]->est_area, remaining[i]->name) <
                     std::make_tuple(-static_cast<int>(best->group.support),
                                     best->est_area, best->name));
            if (better) {
                best = remaining[i];
                best_gain = gain;
                best_idx = i;
            }
        }
        if (!best || best_gain <= 0.0) break;
        chosen.extensions.push_back(*best);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_idx));
        current -= best_gain;
    }
    return chosen;
}

std::string format_reduction_pct(double original, double extended) {
    const double pct = original == 0.0 ? 0.0 : 100.0 * (1.0 - extended / original);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", pct);
    return buf;
}

}  // namespace celle
