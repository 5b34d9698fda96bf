#pragma once

#include <string>

namespace celle {

// Built-in 12-cell library in the FreePDK45 naming style. Used when no
// --lib is given; data/freepdk45ish.json carries the same content.
const std::string& default_library_json();

// Built-in rewrite rules: 14 commutativity, 4 De Morgan,
// 6 simplification and 1 involution rule over the default cells.
const std::string& default_rules_text();

}  // namespace celle
