#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "celle/library.hpp"
#include "celle/netlist.hpp"

namespace celle {

using EClassId = std::uint32_t;
using ENodeId = std::uint32_t;

// Operator of an e-node: either a library cell index or a primary-input
// leaf (kInputBase + PI index). Distinct PIs are distinct operators so
// the hashcons never conflates them.
struct ENode {
    std::uint32_t op = 0;
    std::vector<EClassId> children;
};

// E-graph with hashcons and union-find congruence maintenance. Mutation
// is single-writer; merges queue congruence repairs that rebuild()
// settles by upward merging through parent back-references.
class EGraph {
public:
    static constexpr std::uint32_t kInputBase = 0x80000000u;

    explicit EGraph(const CellLibrary& lib) : lib_(&lib) {}

    bool is_input_op(std::uint32_t op) const { return op >= kInputBase; }
    std::uint32_t op_arity(std::uint32_t op) const {
        return is_input_op(op) ? 0 : lib_->at(op).arity();
    }
    std::string op_name(std::uint32_t op) const {
        return is_input_op(op) ? CellLibrary::kInputName : lib_->at(op).name;
    }
    // PI name for input ops.
    const std::string& input_name(std::uint32_t op) const {
        return pi_names_.at(op - kInputBase);
    }

    // Inserts (or finds) an e-node; returns its e-class. Throws on arity
    // mismatch. Idempotent for identical canonical (op, children).
    EClassId add_enode(std::uint32_t op, std::vector<EClassId> children);
    EClassId add_input(const std::string& pi_name);

    // Unions two classes and queues congruence repair; returns the
    // canonical id. rebuild() must run before the next read phase.
    EClassId merge(EClassId a, EClassId b);
    void rebuild();
    bool clean() const { return pending_.empty(); }

    EClassId find(EClassId c) const;

    std::size_t num_nodes() const { return alive_count_; }
    std::size_t num_classes() const;
    std::size_t node_arena_size() const { return nodes_.size(); }

    bool alive(ENodeId n) const { return alive_[n]; }
    const ENode& node(ENodeId n) const { return nodes_[n]; }
    EClassId class_of(ENodeId n) const { return find(node_class_[n]); }

    // Alive members of a canonical class, in insertion order.
    std::vector<ENodeId> members(EClassId c) const;
    // Canonical class ids, ascending.
    std::vector<EClassId> classes() const;

    const CellLibrary& lib() const { return *lib_; }
    const std::vector<std::string>& pi_names() const { return pi_names_; }

    // Full-scan congruence check: no two alive nodes with equal
    // (op, canonical children) in different classes, and classes
    // partition the alive node set.
    bool check_congruence() const;

    std::map<std::string, EClassId> roots;   // PO name -> class
    std::map<std::string, EClassId> leaves;  // PI name -> class
    std::vector<std::string> po_order;       // POs in netlist order

    // Counts every structural change (node added or classes unioned);
    // used for fixpoint detection.
    std::uint64_t version() const { return version_; }

private:
    struct KeyHash {
        std::size_t operator()(const ENode& k) const;
    };
    struct KeyEq {
        bool operator()(const ENode& a, const ENode& b) const {
            return a.op == b.op && a.children == b.children;
        }
    };

    void canonicalize(std::vector<EClassId>& ch) const;
    void repair(EClassId cls);

    const CellLibrary* lib_;
    std::vector<ENode> nodes_;
    std::vector<bool> alive_;
    std::vector<EClassId> node_class_;
    mutable std::vector<EClassId> uf_;
    std::vector<std::vector<ENodeId>> class_members_;
    std::vector<std::vector<ENodeId>> class_parents_;
    std::unordered_map<ENode, ENodeId, KeyHash, KeyEq> hashcons_;
    std::vector<EClassId> pending_;
    std::vector<std::string> pi_names_;
    std::map<std::string, std::uint32_t> pi_index_;
    std::size_t alive_count_ = 0;
    std::uint64_t version_ = 0;
};

// One e-node per gate in topological order, children in declared pin
// order; PIs become leaf e-nodes; roots records each PO's class.
EGraph build_egraph(const Netlist& nl);

// JSON snapshot (dump + reload) for stage-isolated runs.
std::string serialize_egraph(const EGraph& g);
EGraph parse_egraph(const std::string& text, const CellLibrary& lib);

// Expression term extracted from the e-graph. Shared subterms are
// represented once; treat as an immutable tree. Carries the cell
// function so terms evaluate without a library handle.
struct Term {
    std::uint32_t op = 0;
    std::string label;  // cell name, or PI name for leaves
    TruthTable fn;      // unused for PI leaves
    std::vector<std::shared_ptr<const Term>> children;
};
using TermPtr = std::shared_ptr<const Term>;

// Minimum-cost choice per canonical class under a per-op cost map
// (missing ops cost `default_cost`). Fixpoint relaxation; ties broken
// by lowest ENodeId.
struct Extraction {
    std::vector<double> cost;     // indexed by canonical class id
    std::vector<ENodeId> choice;  // kNoChoice when no finite-cost term
    static constexpr ENodeId kNoChoice = ~0u;
};
Extraction run_extraction(const EGraph& g, const std::map<std::string, double>& op_cost,
                          double default_cost = 1.0);

TermPtr extract_term(const EGraph& g, EClassId root, const Extraction& ex);
TermPtr extract_term(const EGraph& g, EClassId root,
                     const std::map<std::string, double>& op_cost);

double term_cost(const TermPtr& t, const std::map<std::string, double>& op_cost,
                 double default_cost = 1.0);

// Evaluates a term on 64 packed assignments per PI.
std::uint64_t eval_term_words(const TermPtr& t,
                              const std::map<std::string, std::uint64_t>& pi_words);

}  // namespace celle
