#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "celle/boolfn.hpp"
#include "celle/egraph.hpp"
#include "celle/library.hpp"
#include "celle/netlist.hpp"
#include "celle/pattern_graph.hpp"

namespace celle {

// Transistor-count area model: a complex CMOS gate realizing the SOP
// costs 2 transistors per literal, plus an output inverter unless the
// SOP is all-negative (NAND/NOR/OAI style, directly realizable).
int transistor_count(const MinimizedSOP& sop);

// Least-squares fit of area = beta * transistors over the base cells.
double fit_area_beta(const CellLibrary& lib);
double estimate_cell_area(const MinimizedSOP& sop, const CellLibrary& lib);

struct CandidateCell {
    std::string name;  // generated, e.g. CX3_E8
    CanonicalFunction function;
    MinimizedSOP sop;
    PatternGroup group;
    double est_area = 0.0;
};

// Scores groups into candidates; drops constants and functions the base
// library already provides (P-equivalent to an existing cell).
std::vector<CandidateCell> make_candidates(const std::vector<PatternGroup>& groups,
                                           const CellLibrary& lib,
                                           std::uint32_t max_inputs,
                                           std::uint32_t max_gates);

struct ExtendedLibrary {
    const CellLibrary* base = nullptr;
    std::vector<CandidateCell> extensions;

    // Base plus extension cells materialized as CellTypes.
    std::shared_ptr<CellLibrary> materialize() const;
};

struct EvalResult {
    double area = 0.0;
    std::size_t gates = 0;
    std::map<std::string, double> per_root_cost;
    std::map<std::string, std::size_t> cell_uses;  // extension cell -> instances
    std::shared_ptr<CellLibrary> lib;  // owns cells referenced by netlist
    Netlist netlist;
};

// Cost-based extraction where composite implementations (projections of
// extension-cell patterns rooted at a class) compete with single
// e-nodes. Total area de-duplicates shared subterms: each chosen class
// implementation is counted once over all PO roots.
EvalResult evaluate_extension(const EGraph& g, const PatternGraph& pg,
                              const ExtendedLibrary& ext);

struct QoRWeights {
    double delay_exp = 0.0;  // inert in the area-only flow
    double power_exp = 0.0;
    double area_exp = 1.0;
};

// Greedy forward selection: repeatedly add the candidate with the
// largest area improvement, stop at `budget` cells or when the best
// improvement is not positive. Ties: larger support, smaller est_area,
// lexicographic name. `exhaustive` searches all subsets (<= 15
// candidates).
ExtendedLibrary select_cells(const std::vector<CandidateCell>& candidates,
                             std::uint32_t budget, const EGraph& g,
                             const PatternGraph& pg, const CellLibrary& base,
                             bool exhaustive = false);

// 100 * (1 - ext/orig), fixed two decimals.
std::string format_reduction_pct(double original, double extended);

}  // namespace celle
