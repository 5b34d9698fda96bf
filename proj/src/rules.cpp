#include "celle/rules.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "celle/error.hpp"

namespace celle {

namespace {

struct Tokenizer {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
};

bool is_variable_name(const std::string& tok) {
    if (tok.empty()) return false;
    if (!std::islower(static_cast<unsigned char>(tok[0])) && tok[0] != '_') return false;
    for (char c : tok)
        if (!std::islower(static_cast<unsigned char>(c)) &&
            !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

PatternNode parse_pattern(Tokenizer& tz, const CellLibrary& lib, const std::string& rule,
                          std::map<std::string, int>& vars,
                          std::vector<std::string>& var_names, bool allow_new_vars) {
    const std::string tok = tz.ident();
    if (tok.empty()) throw Error("rules: " + rule + ": expected identifier");
    PatternNode node;
    if (tz.eat('(')) {
        if (tok == CellLibrary::kInputName || tok == CellLibrary::kOutputName)
            throw Error("rules: " + rule + ": pseudo-cell " + tok + " not allowed in patterns");
        const CellType* cell = lib.find(tok);
        if (!cell) throw Error("rules: " + rule + ": unknown op " + tok);
        node.op = lib.index_of(tok);
        if (!tz.eat(')')) {
            do {
                node.children.push_back(
                    parse_pattern(tz, lib, rule, vars, var_names, allow_new_vars));
            } while (tz.eat(','));
            if (!tz.eat(')')) throw Error("rules: " + rule + ": expected ')'");
        }
        if (node.children.size() != cell->arity())
            throw Error("rules: " + rule + ": op " + tok + " expects " +
                        std::to_string(cell->arity()) + " args, got " +
                        std::to_string(node.children.size()));
    } else {
        if (!is_variable_name(tok))
            throw Error("rules: " + rule + ": bad variable name " + tok);
        auto it = vars.find(tok);
        if (it == vars.end()) {
            if (!allow_new_vars)
                throw Error("rules: " + rule + ": rhs variable " + tok + " not bound in lhs");
            const int idx = static_cast<int>(var_names.size());
            vars[tok] = idx;
            var_names.push_back(tok);
            node.var = idx;
        } else {
            node.var = it->second;
        }
    }
    return node;
}

}  // namespace

std::vector<RewriteRule> parse_rules(const std::string& text, const CellLibrary& lib) {
    std::vector<RewriteRule> rules;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error("rules: missing ':' in line: " + line);
        RewriteRule rule;
        rule.name = line.substr(0, colon);
        rule.name.erase(std::remove_if(rule.name.begin(), rule.name.end(), ::isspace),
                        rule.name.end());
        if (rule.name.empty()) throw Error("rules: empty rule name in line: " + line);
        const auto arrow = line.find("=>", colon);
        if (arrow == std::string::npos)
            throw Error("rules: " + rule.name + ": missing '=>'");
        std::string lhs_text = line.substr(colon + 1, arrow - colon - 1);
        std::string rhs_text = line.substr(arrow + 2);

        std::map<std::string, int> vars;
        Tokenizer lt{lhs_text};
        rule.lhs = parse_pattern(lt, lib, rule.name, vars, rule.var_names, true);
        if (!lt.done()) throw Error("rules: " + rule.name + ": trailing text after lhs");
        if (rule.lhs.is_var())
            throw Error("rules: " + rule.name + ": lhs must be an operator pattern");
        Tokenizer rt{rhs_text};
        rule.rhs = parse_pattern(rt, lib, rule.name, vars, rule.var_names, false);
        if (!rt.done()) throw Error("rules: " + rule.name + ": trailing text after rhs");
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::string format_pattern(const PatternNode& p, const CellLibrary& lib,
                           const std::vector<std::string>& var_names) {
    if (p.is_var()) return var_names[p.var];
    std::string out = lib.at(p.op).name;
    out += '(';
    for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += ',';
        out += format_pattern(p.children[i], lib, var_names);
    }
    out += ')';
    return out;
}

namespace {

bool eval_pattern(const PatternNode& p, const CellLibrary& lib, std::uint32_t assignment) {
    if (p.is_var()) return (assignment >> p.var) & 1u;
    std::uint32_t row = 0;
    for (std::size_t i = 0; i < p.children.size(); ++i)
        row |= static_cast<std::uint32_t>(eval_pattern(p.children[i], lib, assignment)) << i;
    return lib.at(p.op).function.eval(row);
}

}  // namespace

bool rule_is_sound(const RewriteRule& rule, const CellLibrary& lib) {
    const std::uint32_t n = static_cast<std::uint32_t>(rule.var_names.size());
    for (std::uint32_t a = 0; a < (1u << n); ++a)
        if (eval_pattern(rule.lhs, lib, a) != eval_pattern(rule.rhs, lib, a)) return false;
    return true;
}

SaturationLimits SaturationLimits::for_gates(std::size_t gates, double headroom) {
    SaturationLimits lim;
    lim.max_enodes = std::max<std::uint64_t>(
        64, static_cast<std::uint64_t>(headroom * static_cast<double>(gates)));
    return lim;
}

std::string serialize_report(const SaturationReport& r) {
    nlohmann::ordered_json doc;
    doc["iterations"] = r.iterations;
    doc["enodes"] = r.enodes;
    doc["classes"] = r.classes;
    doc["stop_reason"] = r.stop_reason;
    return doc.dump(2) + "\n";
}

namespace {

using Subst = std::vector<EClassId>;
constexpr EClassId kUnbound = ~0u;

void match_rec(const EGraph& g, const PatternNode& p, EClassId cls, Subst& bind,
               std::vector<Subst>& out) {
    cls = g.find(cls);
    if (p.is_var()) {
        if (bind[p.var] == kUnbound) {
            bind[p.var] = cls;
            out.push_back(bind);
            bind[p.var] = kUnbound;
        } else if (bind[p.var] == cls) {
            out.push_back(bind);
        }
        return;
    }
    for (ENodeId n : g.members(cls)) {
        const ENode& node = g.node(n);
        if (node.op != p.op) continue;
        // Match children left to right, carrying all partial bindings.
        std::vector<Subst> partial{bind};
        for (std::size_t i = 0; i < p.children.size() && !partial.empty(); ++i) {
            std::vector<Subst> next;
            for (auto& b : partial)
                match_rec(g, p.children[i], node.children[i], b, next);
            partial = std::move(next);
        }
        for (auto& b : partial) out.push_back(std::move(b));
    }
}

EClassId instantiate(EGraph& g, const PatternNode& p, const Subst& bind) {
    if (p.is_var()) return g.find(bind[p.var]);
    std::vector<EClassId> children;
    children.reserve(p.children.size());
    for (const auto& c : p.children) children.push_back(instantiate(g, c, bind));
    return g.add_enode(p.op, std::move(children));
}

struct Match {
    std::uint32_t rule;
    EClassId cls;
    Subst bind;
};

void collect_matches(const EGraph& g, const std::vector<RewriteRule>& rules,
                     const std::vector<EClassId>& classes, std::size_t begin,
                     std::size_t end, std::vector<Match>& out) {
    for (std::size_t ci = begin; ci < end; ++ci) {
        const EClassId cls = classes[ci];
        for (std::uint32_t ri = 0; ri < rules.size(); ++ri) {
            Subst bind(rules[ri].var_names.size(), kUnbound);
            std::vector<Subst> found;
            match_rec(g, rules[ri].lhs, cls, bind, found);
            for (auto& b : found) out.push_back({ri, cls, std::move(b)});
        }
    }
}

}  // namespace

SaturationReport saturate(EGraph& g, const std::vector<RewriteRule>& rules,
                          const SaturationLimits& limits, unsigned jobs) {
    if (!g.clean()) g.rebuild();
    const auto t0 = std::chrono::steady_clock::now();
    SaturationReport report;
    report.stop_reason = "iteration_limit";
    for (std::uint32_t iter = 1; iter <= limits.max_iterations; ++iter) {
        report.iterations = iter;
        const std::vector<EClassId> classes = g.classes();
        std::vector<Match> matches;
        if (jobs <= 1 || classes.size() < 64) {
            collect_matches(g, rules, classes, 0, classes.size(), matches);
        } else {
            // Chunked collection; concatenation in chunk order keeps the
            // result identical to the sequential scan.
            const unsigned n = std::min<unsigned>(jobs, 16);
            std::vector<std::vector<Match>> parts(n);
            std::vector<std::thread> threads;
            const std::size_t step = (classes.size() + n - 1) / n;
            for (unsigned t = 0; t < n; ++t) {
                const std::size_t lo = std::min(classes.size(), t * step);
                const std::size_t hi = std::min(classes.size(), lo + step);
                threads.emplace_back([&, t, lo, hi] {
                    collect_matches(g, rules, classes, lo, hi, parts[t]);
                });
            }
            for (auto& t : threads) t.join();
            for (auto& part : parts)
                matches.insert(matches.end(), std::make_move_iterator(part.begin()),
                               std::make_move_iterator(part.end()));
        }

        const std::uint64_t before = g.version();
        bool node_limit = false;
        for (const Match& m : matches) {
            const EClassId made = instantiate(g, rules[m.rule].rhs, m.bind);
            g.merge(m.cls, made);
            if (g.num_nodes() > limits.max_enodes) { node_limit = true; break; }
        }
        g.rebuild();

        if (node_limit) {
            report.stop_reason = "node_limit";
            break;
        }
        if (g.version() == before) {
            report.stop_reason = "saturated";
            break;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > limits.time_budget_s) {
            report.stop_reason = "time_limit";
            break;
        }
    }
    report.enodes = g.num_nodes();
    report.classes = g.num_classes();
    return report;
}

}  // namespace celle
