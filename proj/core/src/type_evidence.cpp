#include "schemaxray/type_evidence.hpp"

#include <algorithm>

namespace sx {

PrimitiveType literal_primitive(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::String: return PrimitiveType::String;
    case LiteralKind::Int: return PrimitiveType::Int;
    case LiteralKind::Double: return PrimitiveType::Double;
    case LiteralKind::Bool: return PrimitiveType::Bool;
    case LiteralKind::Null: return PrimitiveType::Unknown;
  }
  return PrimitiveType::Unknown;
}

void TypeEvidence::add(const std::string& name, PrimitiveType type) {
  if (type == PrimitiveType::Unknown) return;
  auto& list = entries_[name];
  if (std::find(list.begin(), list.end(), type) == list.end()) list.push_back(type);
}

PrimitiveType TypeEvidence::lookup(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end() || it->second.empty()) return PrimitiveType::Unknown;
  const auto& list = it->second;
  if (list.size() == 1) return list.front();
  bool numeric_only = std::all_of(list.begin(), list.end(), [](PrimitiveType t) {
    return t == PrimitiveType::Int || t == PrimitiveType::Double;
  });
  if (numeric_only) return PrimitiveType::Double;  // int + double widens
  return PrimitiveType::Unknown;
}

bool TypeEvidence::conflicted(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end() || it->second.size() < 2) return false;
  return lookup(name) == PrimitiveType::Unknown;
}

namespace {

// Leaf name of a variable path: `stars` for user.watchedMovies[0].stars,
// `x` for a bare variable access.
const std::string* path_leaf(const Expr& e) {
  switch (e.kind) {
    case ExprKind::VarAccess:
    case ExprKind::PropertyAccess:
      return &e.name;
    case ExprKind::IndexAccess:
      return e.object ? path_leaf(*e.object) : nullptr;
    default:
      return nullptr;
  }
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::StrictEq:
    case BinaryOp::Neq:
    case BinaryOp::Ge:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Lt:
      return true;
    default:
      return false;
  }
}

void scan_expr(const Expr& e, TypeEvidence& ev) {
  if (e.kind == ExprKind::Binary && is_comparison(e.op)) {
    const Expr* lit = nullptr;
    const Expr* other = nullptr;
    if (e.lhs->kind == ExprKind::Literal) { lit = e.lhs.get(); other = e.rhs.get(); }
    else if (e.rhs->kind == ExprKind::Literal) { lit = e.rhs.get(); other = e.lhs.get(); }
    if (lit && other) {
      if (const std::string* leaf = path_leaf(*other))
        ev.add(*leaf, literal_primitive(lit->literal_kind));
    }
  }
  if (e.kind == ExprKind::ObjectLiteral) {
    // Equality-style filter/payload pairs: { name: 'Brian' }.
    for (const auto& [key, value] : e.pairs) {
      if (value->kind == ExprKind::Literal)
        ev.add(key, literal_primitive(value->literal_kind));
    }
  }
}

}  // namespace

TypeEvidence gather_type_evidence(const CodeModel& model) {
  TypeEvidence ev;
  for_each_statement(model, [&](const Statement& s) {
    if (s.kind == StmtKind::VariableDecl && s.expr &&
        s.expr->kind == ExprKind::Literal) {
      ev.add(s.name, literal_primitive(s.expr->literal_kind));
    }
    if (s.kind == StmtKind::Assignment && s.value->kind == ExprKind::Literal) {
      if (const std::string* leaf = path_leaf(*s.target))
        ev.add(*leaf, literal_primitive(s.value->literal_kind));
    }
    for_each_stmt_expr(s, [&](const Expr& e) { scan_expr(e, ev); });
  });
  return ev;
}

void infer_local_types(CodeModel& model, DiagnosticList& diags) {
  TypeEvidence ev = gather_type_evidence(model);

  std::function<void(CodeBlock&)> annotate_block = [&](CodeBlock& b) {
    for (auto& s : b.statements) {
      if (s->kind == StmtKind::VariableDecl) {
        s->decl_type = ev.lookup(s->name);
        if (ev.conflicted(s->name)) {
          Diagnostic d;
          d.severity = Severity::Warning;
          d.code = "types";
          d.message = "conflicting literal evidence for '" + s->name + "'; type left unknown";
          diags.push_back(std::move(d));
        }
      }
      for_each_stmt_expr(*s, [&](const Expr& e) {
        if (e.kind == ExprKind::Lambda && e.body) annotate_block(*e.body);
      });
      if (s->then_block) annotate_block(*s->then_block);
      if (s->else_block) annotate_block(*s->else_block);
    }
  };

  std::function<void(Container&)> visit = [&](Container& c) {
    for (auto& cc : c.code_containers)
      for (auto& b : cc.blocks) annotate_block(*b);
    for (auto& child : c.children) visit(child);
  };
  for (auto& c : model.containers) visit(c);
  model.globals = collect_globals(model);
}

}  // namespace sx
