#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "schemaxray/code_model.hpp"
#include "schemaxray/dos.hpp"

namespace sx::detail {

// Cross-reference index over a code model: node-id lookups and per-file
// string-constant tables used for container-name resolution.
struct AnalysisIndex {
  std::map<std::uint64_t, const Expr*> exprs;
  std::map<std::uint64_t, const Statement*> stmts;
  std::map<std::uint32_t, std::map<std::string, std::string>> file_consts;

  explicit AnalysisIndex(const CodeModel& code);

  const Expr* expr(NodeId id) const;
  const Statement* stmt(NodeId id) const;
  const std::string* string_const(std::uint32_t file, const std::string& name) const;
};

// Maximal access chains rooted at `root` in the statement's expressions
// (lambda bodies excluded; their statements are visited separately). Chains
// inside index expressions are collected as well.
std::vector<VariablePath> paths_rooted_at(const Statement& s, const std::string& root);
std::vector<VariablePath> paths_rooted_at(const Expr& e, const std::string& root);

// Root variable names of all access chains and bare variable accesses in an
// expression, excluding lambda bodies.
std::set<std::string> root_vars(const Expr& e);
std::set<std::string> root_vars_of_stmt(const Statement& s);

// True when `root` occurs as a bare argument of some call in the statement
// (the value escapes into another function).
bool escapes_as_argument(const Statement& s, const std::string& root);

}  // namespace sx::detail
