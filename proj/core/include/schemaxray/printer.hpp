#pragma once

#include <string>
#include <vector>

#include "schemaxray/code_model.hpp"

namespace sx {

// Canonical source regeneration: 2-space indent, single-quoted strings,
// semicolons always, one statement per line.
std::string regenerate(const CodeContainer& container);
std::string regenerate(const CodeBlock& block, int indent = 0);
std::string regenerate_expr(const Expr& e);

// One entry per file container, paired with its path.
std::vector<std::pair<std::string, std::string>> regenerate(const CodeModel& model);

// Structural equality (node ids and spans excluded).
bool structurally_equal(const CodeContainer& a, const CodeContainer& b);
bool structurally_equal(const CodeModel& a, const CodeModel& b);

}  // namespace sx
