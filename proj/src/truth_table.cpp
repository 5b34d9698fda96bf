#include "celle/truth_table.hpp"

#include "celle/error.hpp"

namespace celle {

TruthTable parse_truth(const std::string& text) {
    if (text.size() < 3 || text[0] != '0' || text[1] != 'b')
        throw Error("truth table must be a binary literal like \"0b0110\": " + text);
    const std::string digits = text.substr(2);
    int arity = -1;
    for (int a = 0; a <= TruthTable::kMaxArity; ++a) {
        if (digits.size() == (1u << a)) { arity = a; break; }
    }
    if (arity < 0)
        throw Error("truth table length " + std::to_string(digits.size()) +
                    " is not 2^arity for arity <= 6: " + text);
    TruthTable t;
    t.arity = static_cast<std::uint8_t>(arity);
    for (std::size_t k = 0; k < digits.size(); ++k) {
        const char c = digits[k];
        if (c != '0' && c != '1')
            throw Error("truth table contains non-binary digit: " + text);
        // First digit is the most significant bit (highest row).
        const std::size_t row = digits.size() - 1 - k;
        if (c == '1') t.bits |= 1ull << row;
    }
    return t;
}

std::string format_truth(const TruthTable& t) {
    std::string out = "0b";
    for (std::uint32_t k = 0; k < t.rows(); ++k) {
        const std::uint32_t row = t.rows() - 1 - k;
        out += t.eval(row) ? '1' : '0';
    }
    return out;
}

}  // namespace celle
