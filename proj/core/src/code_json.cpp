#include "schemaxray/code_json.hpp"

namespace sx {

namespace {

Json expr_to_json(const Expr& e);
Json block_to_json(const CodeBlock& b);

Json id_json(NodeId id) {
  if (!id.valid()) return nullptr;
  return id.value;
}

Json expr_to_json(const Expr& e) {
  Json j;
  j["id"] = id_json(e.id);
  switch (e.kind) {
    case ExprKind::Literal:
      j["kind"] = "literal";
      j["literalKind"] = to_string(e.literal_kind);
      j["lexeme"] = e.lexeme;
      break;
    case ExprKind::VarAccess:
      j["kind"] = "varAccess";
      j["name"] = e.name;
      break;
    case ExprKind::PropertyAccess:
      j["kind"] = "propertyAccess";
      j["property"] = e.name;
      j["object"] = expr_to_json(*e.object);
      break;
    case ExprKind::IndexAccess:
      j["kind"] = "indexAccess";
      j["object"] = expr_to_json(*e.object);
      j["index"] = expr_to_json(*e.index);
      break;
    case ExprKind::Call: {
      j["kind"] = "call";
      j["method"] = e.name;
      j["receiver"] = e.object ? expr_to_json(*e.object) : Json(nullptr);
      Json args = Json::array();
      for (const auto& a : e.args) args.push_back(expr_to_json(*a));
      j["args"] = std::move(args);
      break;
    }
    case ExprKind::Lambda: {
      j["kind"] = "lambda";
      j["params"] = e.params;
      j["anonymous"] = e.anonymous;
      j["body"] = block_to_json(*e.body);
      break;
    }
    case ExprKind::ObjectLiteral: {
      j["kind"] = "objectLiteral";
      Json pairs = Json::array();
      for (const auto& [k, v] : e.pairs) {
        Json p;
        p["name"] = k;
        p["value"] = expr_to_json(*v);
        pairs.push_back(std::move(p));
      }
      j["pairs"] = std::move(pairs);
      break;
    }
    case ExprKind::ArrayLiteral: {
      j["kind"] = "arrayLiteral";
      Json items = Json::array();
      for (const auto& a : e.args) items.push_back(expr_to_json(*a));
      j["items"] = std::move(items);
      break;
    }
    case ExprKind::New: {
      j["kind"] = "new";
      j["className"] = e.name;
      Json args = Json::array();
      for (const auto& a : e.args) args.push_back(expr_to_json(*a));
      j["args"] = std::move(args);
      break;
    }
    case ExprKind::Binary:
      j["kind"] = "binary";
      j["op"] = to_string(e.op);
      j["lhs"] = expr_to_json(*e.lhs);
      j["rhs"] = expr_to_json(*e.rhs);
      break;
  }
  return j;
}

Json stmt_to_json(const Statement& s) {
  Json j;
  j["id"] = id_json(s.id);
  j["span"] = {{"line", s.span.line},
               {"column", s.span.column},
               {"offset", s.span.offset},
               {"length", s.span.length}};
  Json v;
  switch (s.kind) {
    case StmtKind::ExpressionStmt:
      v["kind"] = "expressionStmt";
      v["expr"] = expr_to_json(*s.expr);
      if (s.opaque) v["opaque"] = true;
      break;
    case StmtKind::VariableDecl:
      v["kind"] = "variableDecl";
      v["name"] = s.name;
      v["init"] = s.expr ? expr_to_json(*s.expr) : Json(nullptr);
      break;
    case StmtKind::Assignment:
      v["kind"] = "assignment";
      v["target"] = expr_to_json(*s.target);
      v["value"] = expr_to_json(*s.value);
      break;
    case StmtKind::If:
      v["kind"] = "if";
      v["cond"] = expr_to_json(*s.cond);
      v["then"] = block_to_json(*s.then_block);
      v["else"] = s.else_block ? block_to_json(*s.else_block) : Json(nullptr);
      break;
    case StmtKind::While:
      v["kind"] = "while";
      v["cond"] = expr_to_json(*s.cond);
      v["body"] = block_to_json(*s.then_block);
      break;
    case StmtKind::Return:
      v["kind"] = "return";
      v["value"] = s.expr ? expr_to_json(*s.expr) : Json(nullptr);
      break;
  }
  j["variant"] = std::move(v);
  return j;
}

Json block_to_json(const CodeBlock& b) {
  Json j;
  j["id"] = id_json(b.id);
  if (b.callable) {
    j["callable"] = {{"params", b.callable->params},
                     {"anonymous", b.callable->anonymous}};
  } else {
    j["callable"] = nullptr;
  }
  Json locals = Json::array();
  for (const auto& l : b.locals()) {
    locals.push_back({{"name", l.name},
                      {"declaredType", to_string(l.declared_type)},
                      {"initSite", l.init_site.valid() ? Json(l.init_site.value) : Json(nullptr)}});
  }
  j["locals"] = std::move(locals);
  Json stmts = Json::array();
  for (const auto& s : b.statements) stmts.push_back(stmt_to_json(*s));
  j["statements"] = std::move(stmts);
  return j;
}

Json container_to_json(const Container& c) {
  Json j;
  j["kind"] = c.kind == ContainerKind::Directory ? "directory" : "file";
  j["path"] = c.path;
  if (c.kind == ContainerKind::File) j["fileIndex"] = c.file_index;
  Json ccs = Json::array();
  for (const auto& cc : c.code_containers) ccs.push_back(code_container_to_json(cc));
  j["codeContainers"] = std::move(ccs);
  Json children = Json::array();
  for (const auto& child : c.children) children.push_back(container_to_json(child));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

Json code_container_to_json(const CodeContainer& container) {
  Json j;
  j["kind"] = container.kind == CodeContainerKind::Script ? "script" : "class-body";
  Json blocks = Json::array();
  for (const auto& b : container.blocks) blocks.push_back(block_to_json(*b));
  j["blocks"] = std::move(blocks);
  return j;
}

Json code_model_to_json(const CodeModel& model) {
  Json j;
  j["formatVersion"] = 1;
  Json containers = Json::array();
  for (const auto& c : model.containers) containers.push_back(container_to_json(c));
  j["containers"] = std::move(containers);
  Json classes = Json::array();
  for (const auto& cls : model.classes) {
    Json props = Json::array();
    for (const auto& [name, type] : cls.properties)
      props.push_back({{"name", name}, {"type", to_string(type)}});
    classes.push_back({{"name", cls.name}, {"properties", std::move(props)}});
  }
  j["classes"] = std::move(classes);
  Json globals = Json::array();
  for (const auto& g : model.globals) {
    globals.push_back({{"name", g.name},
                       {"declaredType", to_string(g.declared_type)},
                       {"initSite", g.init_site.valid() ? Json(g.init_site.value) : Json(nullptr)}});
  }
  j["globals"] = std::move(globals);
  return j;
}

}  // namespace sx
