#include "schemaxray/code_model.hpp"

namespace sx {

std::string to_string(PrimitiveType t) {
  switch (t) {
    case PrimitiveType::String: return "string";
    case PrimitiveType::Int: return "int";
    case PrimitiveType::Double: return "double";
    case PrimitiveType::Bool: return "bool";
    case PrimitiveType::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq: return "==";
    case BinaryOp::StrictEq: return "===";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string to_string(LiteralKind k) {
  switch (k) {
    case LiteralKind::String: return "string";
    case LiteralKind::Int: return "int";
    case LiteralKind::Double: return "double";
    case LiteralKind::Bool: return "bool";
    case LiteralKind::Null: return "null";
  }
  return "null";
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->id = id;
  e->kind = kind;
  e->literal_kind = literal_kind;
  e->lexeme = lexeme;
  e->name = name;
  e->op = op;
  e->anonymous = anonymous;
  e->params = params;
  if (object) e->object = object->clone();
  if (index) e->index = index->clone();
  if (lhs) e->lhs = lhs->clone();
  if (rhs) e->rhs = rhs->clone();
  for (const auto& a : args) e->args.push_back(a->clone());
  for (const auto& [k, v] : pairs) e->pairs.emplace_back(k, v->clone());
  if (body) e->body = body->clone();
  return e;
}

StmtPtr Statement::clone() const {
  auto s = std::make_unique<Statement>();
  s->id = id;
  s->span = span;
  s->kind = kind;
  s->name = name;
  s->opaque = opaque;
  s->decl_type = decl_type;
  if (expr) s->expr = expr->clone();
  if (target) s->target = target->clone();
  if (value) s->value = value->clone();
  if (cond) s->cond = cond->clone();
  if (then_block) s->then_block = then_block->clone();
  if (else_block) s->else_block = else_block->clone();
  return s;
}

BlockPtr CodeBlock::clone() const {
  auto b = std::make_unique<CodeBlock>();
  b->id = id;
  b->callable = callable;
  for (const auto& s : statements) b->statements.push_back(s->clone());
  return b;
}

std::vector<VariableDeclInfo> CodeBlock::locals() const {
  std::vector<VariableDeclInfo> out;
  for (const auto& s : statements) {
    if (s->kind == StmtKind::VariableDecl) {
      VariableDeclInfo info;
      info.name = s->name;
      info.declared_type = s->decl_type;
      info.init_site = s->expr ? s->id : NodeId{};
      out.push_back(std::move(info));
    }
  }
  return out;
}

CodeContainer CodeContainer::clone() const {
  CodeContainer c;
  c.kind = kind;
  for (const auto& b : blocks) c.blocks.push_back(b->clone());
  return c;
}

Container Container::clone() const {
  Container c;
  c.kind = kind;
  c.path = path;
  c.file_index = file_index;
  for (const auto& child : children) c.children.push_back(child.clone());
  for (const auto& cc : code_containers) c.code_containers.push_back(cc.clone());
  return c;
}

CodeModel CodeModel::clone() const {
  CodeModel m;
  for (const auto& c : containers) m.containers.push_back(c.clone());
  m.classes = classes;
  m.globals = globals;
  m.sources = sources;
  m.file_paths = file_paths;
  return m;
}

namespace {

void walk_block(const CodeBlock& block, const std::function<void(const Statement&)>& fn);

void walk_expr_stmts(const Expr& e, const std::function<void(const Statement&)>& fn) {
  if (e.object) walk_expr_stmts(*e.object, fn);
  if (e.index) walk_expr_stmts(*e.index, fn);
  if (e.lhs) walk_expr_stmts(*e.lhs, fn);
  if (e.rhs) walk_expr_stmts(*e.rhs, fn);
  for (const auto& a : e.args) walk_expr_stmts(*a, fn);
  for (const auto& [k, v] : e.pairs) walk_expr_stmts(*v, fn);
  if (e.body) walk_block(*e.body, fn);
}

void walk_stmt(const Statement& s, const std::function<void(const Statement&)>& fn) {
  fn(s);
  if (s.expr) walk_expr_stmts(*s.expr, fn);
  if (s.target) walk_expr_stmts(*s.target, fn);
  if (s.value) walk_expr_stmts(*s.value, fn);
  if (s.cond) walk_expr_stmts(*s.cond, fn);
  if (s.then_block) walk_block(*s.then_block, fn);
  if (s.else_block) walk_block(*s.else_block, fn);
}

void walk_block(const CodeBlock& block, const std::function<void(const Statement&)>& fn) {
  for (const auto& s : block.statements) walk_stmt(*s, fn);
}

}  // namespace

void for_each_statement(const CodeBlock& block,
                        const std::function<void(const Statement&)>& fn) {
  walk_block(block, fn);
}

void for_each_statement(const CodeModel& model,
                        const std::function<void(const Statement&)>& fn) {
  std::function<void(const Container&)> visit = [&](const Container& c) {
    for (const auto& cc : c.code_containers)
      for (const auto& b : cc.blocks) walk_block(*b, fn);
    for (const auto& child : c.children) visit(child);
  };
  for (const auto& c : model.containers) visit(c);
}

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  if (e.object) for_each_expr(*e.object, fn);
  if (e.index) for_each_expr(*e.index, fn);
  if (e.lhs) for_each_expr(*e.lhs, fn);
  if (e.rhs) for_each_expr(*e.rhs, fn);
  for (const auto& a : e.args) for_each_expr(*a, fn);
  for (const auto& [k, v] : e.pairs) for_each_expr(*v, fn);
  // Lambda bodies are separate blocks; their statements are not expressions
  // of the enclosing statement and are walked via for_each_statement.
}

void for_each_stmt_expr(const Statement& s, const std::function<void(const Expr&)>& fn) {
  if (s.expr) for_each_expr(*s.expr, fn);
  if (s.target) for_each_expr(*s.target, fn);
  if (s.value) for_each_expr(*s.value, fn);
  if (s.cond) for_each_expr(*s.cond, fn);
}

namespace {

struct IdAssigner {
  std::uint32_t file;
  std::uint32_t counter = 0;

  NodeId fresh() { return NodeId(file, counter++); }

  void visit_block(CodeBlock& b) {
    b.id = fresh();
    for (auto& s : b.statements) visit_stmt(*s);
  }

  void visit_stmt(Statement& s) {
    s.id = fresh();
    if (s.expr) visit_expr(*s.expr);
    if (s.target) visit_expr(*s.target);
    if (s.value) visit_expr(*s.value);
    if (s.cond) visit_expr(*s.cond);
    if (s.then_block) visit_block(*s.then_block);
    if (s.else_block) visit_block(*s.else_block);
  }

  void visit_expr(Expr& e) {
    e.id = fresh();
    if (e.object) visit_expr(*e.object);
    if (e.index) visit_expr(*e.index);
    if (e.lhs) visit_expr(*e.lhs);
    if (e.rhs) visit_expr(*e.rhs);
    for (auto& a : e.args) visit_expr(*a);
    for (auto& [k, v] : e.pairs) visit_expr(*v);
    if (e.body) visit_block(*e.body);
  }
};

}  // namespace

void assign_node_ids(CodeContainer& container, std::uint32_t file_index) {
  IdAssigner assigner{file_index};
  for (auto& b : container.blocks) assigner.visit_block(*b);
}

void assign_node_ids(CodeModel& model) {
  std::function<void(Container&)> visit = [&](Container& c) {
    if (c.kind == ContainerKind::File) {
      for (auto& cc : c.code_containers)
        assign_node_ids(cc, c.file_index);
    }
    for (auto& child : c.children) visit(child);
  };
  for (auto& c : model.containers) visit(c);
}

const Statement* CodeModel::find_statement(NodeId id) const {
  const Statement* found = nullptr;
  for_each_statement(*this, [&](const Statement& s) {
    if (s.id == id) found = &s;
  });
  return found;
}

const Expr* CodeModel::find_expr(NodeId id) const {
  const Expr* found = nullptr;
  for_each_statement(*this, [&](const Statement& s) {
    if (found) return;
    for_each_stmt_expr(s, [&](const Expr& e) {
      if (e.id == id) found = &e;
    });
  });
  return found;
}

std::vector<VariableDeclInfo> collect_globals(const CodeModel& model) {
  std::vector<VariableDeclInfo> out;
  std::function<void(const Container&)> visit = [&](const Container& c) {
    for (const auto& cc : c.code_containers) {
      if (cc.kind != CodeContainerKind::Script) continue;
      for (const auto& b : cc.blocks) {
        auto locals = b->locals();
        out.insert(out.end(), locals.begin(), locals.end());
      }
    }
    for (const auto& child : c.children) visit(child);
  };
  for (const auto& c : model.containers) visit(c);
  return out;
}

}  // namespace sx
