#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "celle/truth_table.hpp"

namespace celle {

// One standard cell: ordered input pins, a single output pin, an area
// figure in library units and the cell function as a truth table over
// the declared pin order.
struct CellType {
    std::string name;
    std::vector<std::string> inputs;
    std::string output;
    double area = 0.0;
    TruthTable function;

    std::uint32_t arity() const {
        return static_cast<std::uint32_t>(inputs.size());
    }
};

// Cell collection plus the two reserved pseudo-cells `input` (output pin
// O) and `output` (input pin I) that model primary inputs and outputs as
// ordinary vertices. Pseudo-cells are always present, never serialized
// and excluded from mining.
class CellLibrary {
public:
    static constexpr std::uint32_t kInputCell = 0;
    static constexpr std::uint32_t kOutputCell = 1;
    static constexpr const char* kInputName = "input";
    static constexpr const char* kOutputName = "output";

    CellLibrary();

    // Appends a validated cell. Throws Error on duplicate name, bad pin
    // sets, arity/function mismatch or negative area.
    std::uint32_t add_cell(CellType cell);

    const CellType& at(std::uint32_t idx) const { return cells_.at(idx); }
    const CellType* find(const std::string& name) const;
    std::uint32_t index_of(const std::string& name) const;  // throws if absent

    std::uint32_t size() const { return static_cast<std::uint32_t>(cells_.size()); }
    bool is_pseudo(std::uint32_t idx) const { return idx < 2; }

    // Real (non-pseudo) cells in insertion order.
    std::vector<std::uint32_t> real_cells() const;

    // First real cell whose function matches (arity, bits), or -1.
    int find_by_function(const TruthTable& t) const;

private:
    std::vector<CellType> cells_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

// Library document: { "cells": [ { "name", "inputs", "output", "area",
// "truth" } ] } with "truth" a binary literal of length 2^|inputs|.
CellLibrary parse_library(const std::string& text);
std::string serialize_library(const CellLibrary& lib);

}  // namespace celle
