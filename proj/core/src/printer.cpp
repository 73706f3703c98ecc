#include "schemaxray/printer.hpp"

#include <functional>

namespace sx {

namespace {

constexpr int kIndentWidth = 2;

std::string indent_str(int level) {
  return std::string(static_cast<std::size_t>(level) * kIndentWidth, ' ');
}

std::string escape_single_quoted(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::StrictEq:
    case BinaryOp::Neq: return 3;
    case BinaryOp::Ge:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Lt: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
  }
  return 0;
}

bool ident_like(const std::string& key) {
  if (key.empty()) return false;
  auto start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
  };
  if (!start(key[0])) return false;
  for (char c : key)
    if (!start(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

void print_block_body(const CodeBlock& block, int indent, std::string& out);

std::string print_expr(const Expr& e, int indent);

std::string print_binary_operand(const Expr& operand, const Expr& parent, bool is_right,
                                 int indent) {
  std::string text = print_expr(operand, indent);
  if (operand.kind == ExprKind::Binary) {
    int po = precedence(operand.op);
    int pp = precedence(parent.op);
    if (po < pp || (po == pp && is_right)) return "(" + text + ")";
  }
  return text;
}

std::string print_expr(const Expr& e, int indent) {
  switch (e.kind) {
    case ExprKind::Literal:
      if (e.literal_kind == LiteralKind::String)
        return "'" + escape_single_quoted(e.lexeme) + "'";
      return e.lexeme;
    case ExprKind::VarAccess:
      return e.name;
    case ExprKind::PropertyAccess:
      return print_expr(*e.object, indent) + "." + e.name;
    case ExprKind::IndexAccess:
      return print_expr(*e.object, indent) + "[" + print_expr(*e.index, indent) + "]";
    case ExprKind::Call: {
      std::string out = e.object ? print_expr(*e.object, indent) + "." : "";
      out += e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(*e.args[i], indent);
      }
      out += ")";
      return out;
    }
    case ExprKind::New: {
      std::string out = "new " + e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(*e.args[i], indent);
      }
      out += ")";
      return out;
    }
    case ExprKind::Lambda: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.params.size(); ++i) {
        if (i) out += ", ";
        out += e.params[i];
      }
      out += ") => {";
      if (e.body && !e.body->statements.empty()) {
        out += "\n";
        print_block_body(*e.body, indent + 1, out);
        out += indent_str(indent) + "}";
      } else {
        out += "}";
      }
      return out;
    }
    case ExprKind::ObjectLiteral: {
      if (e.pairs.empty()) return "{}";
      std::string out = "{ ";
      for (std::size_t i = 0; i < e.pairs.size(); ++i) {
        if (i) out += ", ";
        const auto& [key, value] = e.pairs[i];
        out += ident_like(key) ? key : "'" + escape_single_quoted(key) + "'";
        out += ": " + print_expr(*value, indent);
      }
      out += " }";
      return out;
    }
    case ExprKind::ArrayLiteral: {
      if (e.args.empty()) return "[]";
      std::string out = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(*e.args[i], indent);
      }
      out += "]";
      return out;
    }
    case ExprKind::Binary:
      return print_binary_operand(*e.lhs, e, false, indent) + " " + to_string(e.op) +
             " " + print_binary_operand(*e.rhs, e, true, indent);
  }
  return "";
}

void print_statement(const Statement& s, int indent, std::string& out) {
  const std::string pad = indent_str(indent);
  switch (s.kind) {
    case StmtKind::ExpressionStmt:
      out += pad + print_expr(*s.expr, indent) + ";\n";
      return;
    case StmtKind::VariableDecl:
      if (s.expr && s.expr->kind == ExprKind::Lambda && !s.expr->anonymous) {
        const Expr& fn = *s.expr;
        out += pad + "function " + s.name + "(";
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
          if (i) out += ", ";
          out += fn.params[i];
        }
        out += ") {";
        if (fn.body && !fn.body->statements.empty()) {
          out += "\n";
          print_block_body(*fn.body, indent + 1, out);
          out += pad + "}\n";
        } else {
          out += "}\n";
        }
        return;
      }
      out += pad + "const " + s.name;
      if (s.expr) out += " = " + print_expr(*s.expr, indent);
      out += ";\n";
      return;
    case StmtKind::Assignment:
      out += pad + print_expr(*s.target, indent) + " = " + print_expr(*s.value, indent) + ";\n";
      return;
    case StmtKind::If:
      out += pad + "if (" + print_expr(*s.cond, indent) + ") {\n";
      print_block_body(*s.then_block, indent + 1, out);
      if (s.else_block) {
        out += pad + "} else {\n";
        print_block_body(*s.else_block, indent + 1, out);
      }
      out += pad + "}\n";
      return;
    case StmtKind::While:
      out += pad + "while (" + print_expr(*s.cond, indent) + ") {\n";
      print_block_body(*s.then_block, indent + 1, out);
      out += pad + "}\n";
      return;
    case StmtKind::Return:
      out += pad + "return";
      if (s.expr) out += " " + print_expr(*s.expr, indent);
      out += ";\n";
      return;
  }
}

void print_block_body(const CodeBlock& block, int indent, std::string& out) {
  for (const auto& s : block.statements) print_statement(*s, indent, out);
}

}  // namespace

std::string regenerate(const CodeBlock& block, int indent) {
  std::string out;
  print_block_body(block, indent, out);
  return out;
}

std::string regenerate_expr(const Expr& e) { return print_expr(e, 0); }

std::string regenerate(const CodeContainer& container) {
  std::string out;
  for (const auto& b : container.blocks) print_block_body(*b, 0, out);
  return out;
}

std::vector<std::pair<std::string, std::string>> regenerate(const CodeModel& model) {
  std::vector<std::pair<std::string, std::string>> out;
  std::function<void(const Container&)> visit = [&](const Container& c) {
    if (c.kind == ContainerKind::File) {
      std::string text;
      for (const auto& cc : c.code_containers) text += regenerate(cc);
      out.emplace_back(c.path, std::move(text));
    }
    for (const auto& child : c.children) visit(child);
  };
  for (const auto& c : model.containers) visit(c);
  return out;
}

namespace {

bool equal_expr(const Expr& a, const Expr& b);
bool equal_block(const CodeBlock& a, const CodeBlock& b);

bool equal_expr_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return equal_expr(*a, *b);
}

bool equal_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Literal:
      return a.literal_kind == b.literal_kind && a.lexeme == b.lexeme;
    case ExprKind::VarAccess:
      return a.name == b.name;
    case ExprKind::PropertyAccess:
      return a.name == b.name && equal_expr_ptr(a.object, b.object);
    case ExprKind::IndexAccess:
      return equal_expr_ptr(a.object, b.object) && equal_expr_ptr(a.index, b.index);
    case ExprKind::Call: {
      if (a.name != b.name || !equal_expr_ptr(a.object, b.object)) return false;
      if (a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal_expr(*a.args[i], *b.args[i])) return false;
      return true;
    }
    case ExprKind::New: {
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal_expr(*a.args[i], *b.args[i])) return false;
      return true;
    }
    case ExprKind::Lambda:
      return a.anonymous == b.anonymous && a.params == b.params &&
             equal_block(*a.body, *b.body);
    case ExprKind::ObjectLiteral: {
      if (a.pairs.size() != b.pairs.size()) return false;
      for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        if (a.pairs[i].first != b.pairs[i].first) return false;
        if (!equal_expr(*a.pairs[i].second, *b.pairs[i].second)) return false;
      }
      return true;
    }
    case ExprKind::ArrayLiteral: {
      if (a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal_expr(*a.args[i], *b.args[i])) return false;
      return true;
    }
    case ExprKind::Binary:
      return a.op == b.op && equal_expr(*a.lhs, *b.lhs) && equal_expr(*a.rhs, *b.rhs);
  }
  return false;
}

bool equal_stmt(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.name != b.name || a.opaque != b.opaque) return false;
  if (!equal_expr_ptr(a.expr, b.expr)) return false;
  if (!equal_expr_ptr(a.target, b.target)) return false;
  if (!equal_expr_ptr(a.value, b.value)) return false;
  if (!equal_expr_ptr(a.cond, b.cond)) return false;
  if (static_cast<bool>(a.then_block) != static_cast<bool>(b.then_block)) return false;
  if (a.then_block && !equal_block(*a.then_block, *b.then_block)) return false;
  if (static_cast<bool>(a.else_block) != static_cast<bool>(b.else_block)) return false;
  if (a.else_block && !equal_block(*a.else_block, *b.else_block)) return false;
  return true;
}

bool equal_block(const CodeBlock& a, const CodeBlock& b) {
  bool a_callable = a.callable.has_value();
  if (a_callable != b.callable.has_value()) return false;
  if (a_callable &&
      (a.callable->params != b.callable->params ||
       a.callable->anonymous != b.callable->anonymous))
    return false;
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i)
    if (!equal_stmt(*a.statements[i], *b.statements[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const CodeContainer& a, const CodeContainer& b) {
  if (a.kind != b.kind || a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i)
    if (!equal_block(*a.blocks[i], *b.blocks[i])) return false;
  return true;
}

namespace {

void flatten_files(const Container& c, std::vector<const Container*>& out) {
  if (c.kind == ContainerKind::File) out.push_back(&c);
  for (const auto& child : c.children) flatten_files(child, out);
}

}  // namespace

bool structurally_equal(const CodeModel& a, const CodeModel& b) {
  std::vector<const Container*> fa, fb;
  for (const auto& c : a.containers) flatten_files(c, fa);
  for (const auto& c : b.containers) flatten_files(c, fb);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i]->path != fb[i]->path) return false;
    if (fa[i]->code_containers.size() != fb[i]->code_containers.size()) return false;
    for (std::size_t j = 0; j < fa[i]->code_containers.size(); ++j)
      if (!structurally_equal(fa[i]->code_containers[j], fb[i]->code_containers[j]))
        return false;
  }
  return true;
}

}  // namespace sx
