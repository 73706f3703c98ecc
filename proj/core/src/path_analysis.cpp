#include "path_analysis.hpp"

#include "schemaxray/printer.hpp"

namespace sx::detail {

AnalysisIndex::AnalysisIndex(const CodeModel& code) {
  for_each_statement(code, [&](const Statement& s) {
    stmts[s.id.value] = &s;
    for_each_stmt_expr(s, [&](const Expr& e) { exprs[e.id.value] = &e; });
    if (s.kind == StmtKind::VariableDecl && s.expr &&
        s.expr->kind == ExprKind::Literal &&
        s.expr->literal_kind == LiteralKind::String) {
      file_consts[s.id.file()][s.name] = s.expr->lexeme;
    }
  });
}

const Expr* AnalysisIndex::expr(NodeId id) const {
  auto it = exprs.find(id.value);
  return it == exprs.end() ? nullptr : it->second;
}

const Statement* AnalysisIndex::stmt(NodeId id) const {
  auto it = stmts.find(id.value);
  return it == stmts.end() ? nullptr : it->second;
}

const std::string* AnalysisIndex::string_const(std::uint32_t file,
                                               const std::string& name) const {
  auto fit = file_consts.find(file);
  if (fit == file_consts.end()) return nullptr;
  auto it = fit->second.find(name);
  return it == fit->second.end() ? nullptr : &it->second;
}

namespace {

// Builds the path when `e` is a pure access chain bottoming at VarAccess
// `root`. Index sub-expressions are reported back for a separate scan.
bool build_chain(const Expr& e, const std::string& root, VariablePath& out,
                 std::vector<const Expr*>& index_exprs) {
  switch (e.kind) {
    case ExprKind::VarAccess:
      if (e.name != root) return false;
      out.root = root;
      return true;
    case ExprKind::PropertyAccess: {
      if (!e.object || !build_chain(*e.object, root, out, index_exprs)) return false;
      PathSegment seg;
      seg.name = e.name;
      out.segments.push_back(std::move(seg));
      return true;
    }
    case ExprKind::IndexAccess: {
      if (!e.object || !build_chain(*e.object, root, out, index_exprs)) return false;
      PathSegment seg;
      seg.is_index = true;
      seg.index_text = regenerate_expr(*e.index);
      out.segments.push_back(std::move(seg));
      index_exprs.push_back(e.index.get());
      return true;
    }
    default:
      return false;
  }
}

void collect_paths(const Expr& e, const std::string& root, std::vector<VariablePath>& out) {
  VariablePath path;
  std::vector<const Expr*> index_exprs;
  if (build_chain(e, root, path, index_exprs)) {
    path.expr = e.id;
    out.push_back(std::move(path));
    for (const Expr* idx : index_exprs) collect_paths(*idx, root, out);
    return;
  }
  switch (e.kind) {
    case ExprKind::PropertyAccess:
      if (e.object) collect_paths(*e.object, root, out);
      return;
    case ExprKind::IndexAccess:
      if (e.object) collect_paths(*e.object, root, out);
      if (e.index) collect_paths(*e.index, root, out);
      return;
    case ExprKind::Call:
      if (e.object) collect_paths(*e.object, root, out);
      for (const auto& a : e.args)
        if (a->kind != ExprKind::Lambda) collect_paths(*a, root, out);
      return;
    case ExprKind::New:
    case ExprKind::ArrayLiteral:
      for (const auto& a : e.args) collect_paths(*a, root, out);
      return;
    case ExprKind::ObjectLiteral:
      for (const auto& [k, v] : e.pairs) collect_paths(*v, root, out);
      return;
    case ExprKind::Binary:
      collect_paths(*e.lhs, root, out);
      collect_paths(*e.rhs, root, out);
      return;
    default:
      return;
  }
}

void collect_roots(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::VarAccess:
      out.insert(e.name);
      return;
    case ExprKind::PropertyAccess:
      if (e.object) collect_roots(*e.object, out);
      return;
    case ExprKind::IndexAccess:
      if (e.object) collect_roots(*e.object, out);
      if (e.index) collect_roots(*e.index, out);
      return;
    case ExprKind::Call:
      if (e.object) collect_roots(*e.object, out);
      for (const auto& a : e.args)
        if (a->kind != ExprKind::Lambda) collect_roots(*a, out);
      return;
    case ExprKind::New:
    case ExprKind::ArrayLiteral:
      for (const auto& a : e.args) collect_roots(*a, out);
      return;
    case ExprKind::ObjectLiteral:
      for (const auto& [k, v] : e.pairs) collect_roots(*v, out);
      return;
    case ExprKind::Binary:
      collect_roots(*e.lhs, out);
      collect_roots(*e.rhs, out);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<VariablePath> paths_rooted_at(const Expr& e, const std::string& root) {
  std::vector<VariablePath> out;
  collect_paths(e, root, out);
  return out;
}

std::vector<VariablePath> paths_rooted_at(const Statement& s, const std::string& root) {
  std::vector<VariablePath> out;
  if (s.expr) collect_paths(*s.expr, root, out);
  if (s.target) collect_paths(*s.target, root, out);
  if (s.value) collect_paths(*s.value, root, out);
  if (s.cond) collect_paths(*s.cond, root, out);
  return out;
}

std::set<std::string> root_vars(const Expr& e) {
  std::set<std::string> out;
  collect_roots(e, out);
  return out;
}

std::set<std::string> root_vars_of_stmt(const Statement& s) {
  std::set<std::string> out;
  if (s.expr) collect_roots(*s.expr, out);
  if (s.target) collect_roots(*s.target, out);
  if (s.value) collect_roots(*s.value, out);
  if (s.cond) collect_roots(*s.cond, out);
  return out;
}

namespace {

bool escapes_in_expr(const Expr& e, const std::string& root) {
  if (e.kind == ExprKind::Call || e.kind == ExprKind::New) {
    for (const auto& a : e.args) {
      if (a->kind == ExprKind::VarAccess && a->name == root) return true;
      if (a->kind != ExprKind::Lambda && escapes_in_expr(*a, root)) return true;
    }
    if (e.object && escapes_in_expr(*e.object, root)) return true;
    return false;
  }
  if (e.object && escapes_in_expr(*e.object, root)) return true;
  if (e.index && escapes_in_expr(*e.index, root)) return true;
  if (e.lhs && escapes_in_expr(*e.lhs, root)) return true;
  if (e.rhs && escapes_in_expr(*e.rhs, root)) return true;
  for (const auto& [k, v] : e.pairs)
    if (escapes_in_expr(*v, root)) return true;
  if (e.kind == ExprKind::ArrayLiteral)
    for (const auto& a : e.args)
      if (escapes_in_expr(*a, root)) return true;
  return false;
}

}  // namespace

bool escapes_as_argument(const Statement& s, const std::string& root) {
  bool escapes = false;
  for_each_stmt_expr(s, [&](const Expr& e) {
    if (escapes) return;
    if (escapes_in_expr(e, root)) escapes = true;
  });
  return escapes;
}

}  // namespace sx::detail
