#include "celle/library.hpp"

#include <set>

#include <json.hpp>

#include "celle/error.hpp"

namespace celle {

using ordered_json = nlohmann::ordered_json;

CellLibrary::CellLibrary() {
    CellType in;
    in.name = kInputName;
    in.output = "O";
    cells_.push_back(in);
    index_[in.name] = kInputCell;

    CellType out;
    out.name = kOutputName;
    out.inputs = {"I"};
    cells_.push_back(out);
    index_[out.name] = kOutputCell;
}

std::uint32_t CellLibrary::add_cell(CellType cell) {
    if (index_.count(cell.name))
        throw Error("library: duplicate cell name: " + cell.name);
    if (cell.inputs.size() > TruthTable::kMaxArity)
        throw Error("library: cell " + cell.name + " has more than 6 inputs");
    std::set<std::string> pins(cell.inputs.begin(), cell.inputs.end());
    if (pins.size() != cell.inputs.size())
        throw Error("library: cell " + cell.name + " has duplicate input pins");
    if (cell.output.empty() || pins.count(cell.output))
        throw Error("library: cell " + cell.name + " output pin must differ from inputs");
    if (cell.area < 0)
        throw Error("library: cell " + cell.name + " has negative area");
    if (cell.function.arity != cell.inputs.size())
        throw Error("library: cell " + cell.name + " truth table arity " +
                    std::to_string(cell.function.arity) + " does not match " +
                    std::to_string(cell.inputs.size()) + " input pins");
    if (cell.function.bits & ~cell.function.row_mask())
        throw Error("library: cell " + cell.name + " truth table has stray bits");
    const auto idx = static_cast<std::uint32_t>(cells_.size());
    index_[cell.name] = idx;
    cells_.push_back(std::move(cell));
    return idx;
}

const CellType* CellLibrary::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &cells_[it->second];
}

std::uint32_t CellLibrary::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("library: unknown cell: " + name);
    return it->second;
}

std::vector<std::uint32_t> CellLibrary::real_cells() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < cells_.size(); ++i) out.push_back(i);
    return out;
}

int CellLibrary::find_by_function(const TruthTable& t) const {
    for (std::uint32_t i = 2; i < cells_.size(); ++i) {
        if (cells_[i].function == t) return static_cast<int>(i);
    }
    return -1;
}

CellLibrary parse_library(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("library: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array())
        throw Error("library: expected { \"cells\": [...] }");
    CellLibrary lib;
    for (const auto& jc : doc["cells"]) {
        CellType cell;
        try {
            cell.name = jc.at("name").get<std::string>();
            for (const auto& pin : jc.at("inputs"))
                cell.inputs.push_back(pin.get<std::string>());
            cell.output = jc.at("output").get<std::string>();
            cell.area = jc.at("area").get<double>();
            cell.function = parse_truth(jc.at("truth").get<std::string>());
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(std::string("library: malformed cell entry: ") + e.what());
        }
        if (cell.name == CellLibrary::kInputName || cell.name == CellLibrary::kOutputName)
            throw Error("library: cell name is reserved: " + cell.name);
        lib.add_cell(std::move(cell));
    }
    return lib;
}

std::string serialize_library(const CellLibrary& lib) {
    ordered_json doc;
    doc["cells"] = ordered_json::array();
    for (auto idx : lib.real_cells()) {
        const CellType& c = lib.at(idx);
        ordered_json jc;
        jc["name"] = c.name;
        jc["inputs"] = c.inputs;
        jc["output"] = c.output;
        jc["area"] = c.area;
        jc["truth"] = format_truth(c.function);
        doc["cells"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

}  // namespace celle
