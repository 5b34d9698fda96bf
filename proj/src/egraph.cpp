#include "celle/egraph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "celle/error.hpp"

namespace celle {

using ordered_json = nlohmann::ordered_json;

std::size_t EGraph::KeyHash::operator()(const ENode& k) const {
    std::size_t h = std::hash<std::uint32_t>()(k.op);
    for (auto c : k.children) h = h * 1000003u + c;
    return h;
}

EClassId EGraph::find(EClassId c) const {
    while (uf_[c] != c) {
        uf_[c] = uf_[uf_[c]];  // path halving
        c = uf_[c];
    }
    return c;
}

void EGraph::canonicalize(std::vector<EClassId>& ch) const {
    for (auto& c : ch) c = find(c);
}

EClassId EGraph::add_enode(std::uint32_t op, std::vector<EClassId> children) {
    if (children.size() != op_arity(op))
        throw Error("egraph: op " + op_name(op) + " expects " + std::to_string(op_arity(op)) +
                    " children, got " + std::to_string(children.size()));
    canonicalize(children);
    ENode key{op, children};
    auto it = hashcons_.find(key);
    if (it != hashcons_.end()) return class_of(it->second);

    const ENodeId n = static_cast<ENodeId>(nodes_.size());
    const EClassId cls = static_cast<EClassId>(uf_.size());
    nodes_.push_back(key);
    alive_.push_back(true);
    node_class_.push_back(cls);
    uf_.push_back(cls);
    class_members_.push_back({n});
    class_parents_.push_back({});
    for (std::size_t i = 0; i < children.size(); ++i) {
        bool first = true;
        for (std::size_t j = 0; j < i; ++j)
            if (children[j] == children[i]) { first = false; break; }
        if (first) class_parents_[children[i]].push_back(n);
    }
    hashcons_.emplace(std::move(key), n);
    ++alive_count_;
    ++version_;
    return cls;
}

EClassId EGraph::add_input(const std::string& pi_name) {
    auto it = pi_index_.find(pi_name);
    std::uint32_t idx;
    if (it != pi_index_.end()) {
        idx = it->second;
    } else {
        idx = static_cast<std::uint32_t>(pi_names_.size());
        pi_names_.push_back(pi_name);
        pi_index_[pi_name] = idx;
    }
    return add_enode(kInputBase + idx, {});
}

EClassId EGraph::merge(EClassId a, EClassId b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    const EClassId keep = std::min(a, b);
    const EClassId drop = std::max(a, b);
    uf_[drop] = keep;
    auto& km = class_members_[keep];
    auto& dm = class_members_[drop];
    km.insert(km.end(), dm.begin(), dm.end());
    dm.clear();
    dm.shrink_to_fit();
    auto& kp = class_parents_[keep];
    auto& dp = class_parents_[drop];
    kp.insert(kp.end(), dp.begin(), dp.end());
    dp.clear();
    dp.shrink_to_fit();
    pending_.push_back(keep);
    ++version_;
    return keep;
}

void EGraph::repair(EClassId cls) {
    cls = find(cls);
    std::vector<ENodeId> parents;
    parents.swap(class_parents_[cls]);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    std::vector<ENodeId> kept;
    kept.reserve(parents.size());
    for (ENodeId p : parents) {
        if (!alive_[p]) continue;
        // Drop the stale hashcons entry (it was keyed by the node's
        // previous child list) and re-insert under canonical children.
        auto old_it = hashcons_.find(nodes_[p]);
        if (old_it != hashcons_.end() && old_it->second == p) hashcons_.erase(old_it);
        canonicalize(nodes_[p].children);
        auto [it, fresh] = hashcons_.emplace(nodes_[p], p);
        if (!fresh && it->second != p) {
            const ENodeId q = it->second;
            if (alive_[q]) {
                // Congruent duplicate: merge owning classes, keep q.
                alive_[p] = false;
                --alive_count_;
                ++version_;
                merge(class_of(p), class_of(q));
                continue;
            }
            it->second = p;
        }
        kept.push_back(p);
    }
    class_parents_[find(cls)] = std::move(kept);
}

void EGraph::rebuild() {
    while (!pending_.empty()) {
        std::vector<EClassId> todo;
        todo.swap(pending_);
        for (auto& c : todo) c = find(c);
        std::sort(todo.begin(), todo.end());
        todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
        for (EClassId c : todo) repair(c);
    }
    // Compact member lists: drop dead nodes, dedup after unions.
    for (EClassId c = 0; c < uf_.size(); ++c) {
        if (find(c) != c || class_members_[c].empty()) continue;
        auto& m = class_members_[c];
        std::vector<ENodeId> live;
        live.reserve(m.size());
        for (ENodeId n : m)
            if (alive_[n]) live.push_back(n);
        std::sort(live.begin(), live.end());
        live.erase(std::unique(live.begin(), live.end()), live.end());
        m = std::move(live);
    }
}

std::size_t EGraph::num_classes() const {
    std::size_t count = 0;
    for (EClassId c = 0; c < uf_.size(); ++c)
        if (find(c) == c && !members(c).empty()) ++count;
    return count;
}

std::vector<ENodeId> EGraph::members(EClassId c) const {
    std::vector<ENodeId> out;
    for (ENodeId n : class_members_[find(c)])
        if (alive_[n]) out.push_back(n);
    return out;
}

std::vector<EClassId> EGraph::classes() const {
    std::vector<EClassId> out;
    for (EClassId c = 0; c < uf_.size(); ++c)
        if (find(c) == c && !members(c).empty()) out.push_back(c);
    return out;
}

bool EGraph::check_congruence() const {
    std::unordered_map<ENode, ENodeId, KeyHash, KeyEq> seen;
    std::size_t member_total = 0;
    for (EClassId c : classes()) {
        for (ENodeId n : members(c)) {
            ++member_total;
            if (class_of(n) != c) return false;
            ENode key = nodes_[n];
            std::vector<EClassId> ch = key.children;
            const_cast<EGraph*>(this)->canonicalize(ch);  // find() is logically const
            key.children = ch;
            auto [it, fresh] = seen.emplace(key, n);
            if (!fresh && class_of(it->second) != c) return false;
        }
    }
    return member_total == alive_count_;
}

EGraph build_egraph(const Netlist& nl) {
    EGraph g(*nl.lib);
    std::map<std::string, EClassId> vmap;
    for (const auto& pi : nl.pis) {
        const EClassId cls = g.add_input(pi);
        g.leaves[pi] = cls;
        vmap[pi] = cls;
    }
    for (auto gi : nl.topo_order) {
        const Gate& gate = nl.gates[gi];
        std::vector<EClassId> children;
        children.reserve(gate.input_nets.size());
        for (const auto& net : gate.input_nets) children.push_back(vmap.at(net));
        vmap[gate.output_net] = g.add_enode(gate.cell, std::move(children));
    }
    for (const auto& po : nl.pos) {
        g.roots[po] = vmap.at(po);
        g.po_order.push_back(po);
    }
    return g;
}

std::string serialize_egraph(const EGraph& g) {
    ordered_json doc;
    doc["pis"] = g.pi_names();
    ordered_json nodes = ordered_json::array();
    ordered_json cls = ordered_json::array();
    for (ENodeId n = 0; n < g.node_arena_size(); ++n) {
        if (!g.alive(n)) continue;
        const ENode& node = g.node(n);
        ordered_json jn;
        jn["op"] = g.is_input_op(node.op) ? "$pi:" + g.input_name(node.op)
                                          : g.op_name(node.op);
        std::vector<EClassId> ch = node.children;
        for (auto& c : ch) c = g.find(c);
        jn["children"] = ch;
        nodes.push_back(std::move(jn));
        cls.push_back(g.class_of(n));
    }
    doc["nodes"] = std::move(nodes);
    doc["class"] = std::move(cls);
    ordered_json roots = ordered_json::array();
    for (const auto& po : g.po_order)
        roots.push_back({po, g.find(g.roots.at(po))});
    doc["roots"] = std::move(roots);
    return doc.dump(2) + "\n";
}

EGraph parse_egraph(const std::string& text, const CellLibrary& lib) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("egraph: invalid JSON: ") + e.what());
    }
    EGraph g(lib);
    const auto& nodes = doc.at("nodes");
    const auto& cls = doc.at("class");
    if (nodes.size() != cls.size()) throw Error("egraph: nodes/class length mismatch");
    std::map<EClassId, EClassId> remap;  // recorded class -> new class
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& jn = nodes[i];
        const std::string op = jn.at("op").get<std::string>();
        std::vector<EClassId> children;
        for (const auto& c : jn.at("children")) {
            const EClassId rec = c.get<EClassId>();
            auto it = remap.find(rec);
            if (it == remap.end())
                throw Error("egraph: node references class before definition");
            children.push_back(it->second);
        }
        EClassId made;
        if (op.rfind("$pi:", 0) == 0) {
            made = g.add_input(op.substr(4));
            g.leaves[op.substr(4)] = made;
        } else {
            made = g.add_enode(lib.index_of(op), std::move(children));
        }
        const EClassId rec = cls[i].get<EClassId>();
        auto [it, fresh] = remap.emplace(rec, made);
        if (!fresh) g.merge(it->second, made);
    }
    g.rebuild();
    for (const auto& entry : doc.at("roots")) {
        const std::string po = entry.at(0).get<std::string>();
        g.roots[po] = remap.at(entry.at(1).get<EClassId>());
        g.po_order.push_back(po);
    }
    if (!g.check_congruence()) throw Error("egraph: snapshot failed congruence check");
    return g;
}

Extraction run_extraction(const EGraph& g, const std::map<std::string, double>& op_cost,
                          double default_cost) {
    const double kInf = 1e300;
    auto opc = [&](std::uint32_t op) -> double {
        if (g.is_input_op(op)) {
            auto it = op_cost.find(CellLibrary::kInputName);
            return it == op_cost.end() ? 0.0 : it->second;
        }
        auto it = op_cost.find(g.op_name(op));
        return it == op_cost.end() ? default_cost : it->second;
    };
    const std::size_t n_classes = g.node_arena_size() == 0 ? 0 : g.classes().back() + 1;
    Extraction ex;
    ex.cost.assign(std::max<std::size_t>(n_classes, 1), kInf);
    ex.choice.assign(std::max<std::size_t>(n_classes, 1), Extraction::kNoChoice);

    bool changed = true;
    while (changed) {
        changed = false;
        for (ENodeId n = 0; n < g.node_arena_size(); ++n) {
            if (!g.alive(n)) continue;
            const ENode& node = g.node(n);
            double c = opc(node.op);
            for (auto ch : node.children) {
                const double cc = ex.cost[g.find(ch)];
                if (cc >= kInf) { c = kInf; break; }
                c += cc;
            }
            const EClassId cls = g.class_of(n);
            if (c < ex.cost[cls]) {
                ex.cost[cls] = c;
                changed = true;
            }
        }
    }
    // Deterministic choice: lowest node id among minimum-cost members.
    for (EClassId cls : g.classes()) {
        for (ENodeId n : g.members(cls)) {
            const ENode& node = g.node(n);
            double c = opc(node.op);
            for (auto ch : node.children) {
                const double cc = ex.cost[g.find(ch)];
                if (cc >= kInf) { c = kInf; break; }
                c += cc;
            }
            if (c <= ex.cost[cls] && c < kInf && ex.choice[cls] == Extraction::kNoChoice)
                ex.choice[cls] = n;
        }
    }
    return ex;
}

namespace {

TermPtr build_term(const EGraph& g, EClassId cls, const Extraction& ex,
                   std::map<EClassId, TermPtr>& memo) {
    cls = g.find(cls);
    auto it = memo.find(cls);
    if (it != memo.end()) return it->second;
    const ENodeId n = ex.choice.at(cls);
    if (n == Extraction::kNoChoice)
        throw Error("extract_term: class has no finite-cost term");
    const ENode& node = g.node(n);
    auto term = std::make_shared<Term>();
    term->op = node.op;
    if (g.is_input_op(node.op)) {
        term->label = g.input_name(node.op);
    } else {
        term->label = g.op_name(node.op);
        term->fn = g.lib().at(node.op).function;
    }
    memo[cls] = term;  // pre-register; acyclic choices make this safe
    for (auto ch : node.children)
        term->children.push_back(build_term(g, ch, ex, memo));
    return term;
}

}  // namespace

TermPtr extract_term(const EGraph& g, EClassId root, const Extraction& ex) {
    std::map<EClassId, TermPtr> memo;
    return build_term(g, root, ex, memo);
}

TermPtr extract_term(const EGraph& g, EClassId root,
                     const std::map<std::string, double>& op_cost) {
    return extract_term(g, root, run_extraction(g, op_cost));
}

double term_cost(const TermPtr& t, const std::map<std::string, double>& op_cost,
                 double default_cost) {
    // Tree cost: every occurrence counts, matching extraction's metric.
    double total = 0.0;
    std::vector<const Term*> stack{t.get()};
    while (!stack.empty()) {
        const Term* cur = stack.back();
        stack.pop_back();
        if (cur->op >= EGraph::kInputBase) {
            auto it = op_cost.find(CellLibrary::kInputName);
            total += it == op_cost.end() ? 0.0 : it->second;
        } else {
            auto it = op_cost.find(cur->label);
            total += it == op_cost.end() ? default_cost : it->second;
        }
        for (const auto& c : cur->children) stack.push_back(c.get());
    }
    return total;
}

namespace {

std::uint64_t eval_words_rec(const Term* t,
                             const std::map<std::string, std::uint64_t>& pi_words,
                             std::map<const Term*, std::uint64_t>& memo) {
    auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    std::uint64_t out;
    if (t->op >= EGraph::kInputBase) {
        out = pi_words.at(t->label);
    } else {
        std::uint64_t in[TruthTable::kMaxArity] = {};
        for (std::size_t i = 0; i < t->children.size(); ++i)
            in[i] = eval_words_rec(t->children[i].get(), pi_words, memo);
        std::uint64_t acc = 0;
        for (std::uint32_t row = 0; row < t->fn.rows(); ++row) {
            if (!t->fn.eval(row)) continue;
            std::uint64_t term = ~0ull;
            for (std::uint32_t i = 0; i < t->fn.arity; ++i)
                term &= ((row >> i) & 1u) ? in[i] : ~in[i];
            acc |= term;
        }
        out = acc;
    }
    memo[t] = out;
    return out;
}

}  // namespace

std::uint64_t eval_term_words(const TermPtr& t,
                              const std::map<std::string, std::uint64_t>& pi_words) {
    std::map<const Term*, std::uint64_t> memo;
    return eval_words_rec(t.get(), pi_words, memo);
}

}  // namespace celle
