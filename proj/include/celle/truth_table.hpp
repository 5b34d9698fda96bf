#pragma once

#include <cstdint>
#include <string>

namespace celle {

// Boolean function of up to 6 inputs stored as a packed truth table.
// Row index r encodes the input assignment: bit i of r is the value of
// input i (input 0 is the least significant selector bit). Bit r of
// `bits` is the function value on that row.
struct TruthTable {
    std::uint8_t arity = 0;
    std::uint64_t bits = 0;

    static constexpr int kMaxArity = 6;

    std::uint32_t rows() const { return 1u << arity; }

    bool eval(std::uint32_t row) const { return (bits >> row) & 1u; }

    // Mask of the rows that actually exist for this arity.
    std::uint64_t row_mask() const {
        return arity == 6 ? ~0ull : ((1ull << rows()) - 1);
    }

    bool operator==(const TruthTable&) const = default;
};

// Parses a binary literal like "0b0111" (MSB first, LSB = all-zero row).
// The digit count must be exactly 2^arity for some arity <= 6.
TruthTable parse_truth(const std::string& text);

// Formats as a binary literal with exactly 2^arity digits.
std::string format_truth(const TruthTable& t);

}  // namespace celle
