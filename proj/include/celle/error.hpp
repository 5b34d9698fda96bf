#pragma once

#include <stdexcept>
#include <string>

namespace celle {

// All recoverable failures (parse errors, invalid documents, bad
// configuration) are reported through this type with a message that
// names the offending entity.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace celle
