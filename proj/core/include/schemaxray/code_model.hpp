#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schemaxray/ids.hpp"

namespace sx {

// Language-independent abstract syntax for the supported ECMAScript subset.
// Models are immutable after injection; refactoring works on deep clones.

enum class PrimitiveType { String, Int, Double, Bool, Unknown };

std::string to_string(PrimitiveType t);

struct SourceSpan {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  int offset = 0;  // byte offset into the original source
  int length = 0;
};

enum class LiteralKind { String, Int, Double, Bool, Null };

enum class BinaryOp { Eq, StrictEq, Neq, Ge, Le, Gt, Lt, Add, Sub, And, Or };

std::string to_string(BinaryOp op);
std::string to_string(LiteralKind k);

struct Expr;
struct CodeBlock;
struct Statement;

using ExprPtr = std::unique_ptr<Expr>;
using BlockPtr = std::unique_ptr<CodeBlock>;
using StmtPtr = std::unique_ptr<Statement>;

enum class ExprKind {
  Literal,
  VarAccess,
  PropertyAccess,
  IndexAccess,
  Call,
  Lambda,
  ObjectLiteral,
  ArrayLiteral,
  New,
  Binary,
};

struct Expr {
  NodeId id;
  ExprKind kind = ExprKind::Literal;

  // Literal
  LiteralKind literal_kind = LiteralKind::Null;
  std::string lexeme;  // literal text as written (string contents unescaped)

  // VarAccess / PropertyAccess(property) / Call(method) / New(class name)
  std::string name;

  // PropertyAccess / IndexAccess object, Call receiver
  ExprPtr object;

  // IndexAccess index, Binary lhs/rhs
  ExprPtr index;
  BinaryOp op = BinaryOp::Eq;
  ExprPtr lhs;
  ExprPtr rhs;

  // Call / New arguments, ArrayLiteral items
  std::vector<ExprPtr> args;

  // ObjectLiteral pairs
  std::vector<std::pair<std::string, ExprPtr>> pairs;

  // Lambda
  std::vector<std::string> params;
  BlockPtr body;
  bool anonymous = true;

  ExprPtr clone() const;
};

struct CallableInfo {
  std::vector<std::string> params;
  bool anonymous = true;
};

struct VariableDeclInfo {
  std::string name;
  PrimitiveType declared_type = PrimitiveType::Unknown;
  NodeId init_site;  // statement that initializes the variable, if any
};

enum class StmtKind {
  ExpressionStmt,
  VariableDecl,
  Assignment,
  If,
  While,
  Return,
};

struct Statement {
  NodeId id;
  SourceSpan span;
  StmtKind kind = StmtKind::ExpressionStmt;

  ExprPtr expr;    // ExpressionStmt / Return value / VariableDecl init
  std::string name;  // VariableDecl name
  ExprPtr target;  // Assignment target
  ExprPtr value;   // Assignment value
  ExprPtr cond;    // If / While condition
  BlockPtr then_block;  // If then / While body
  BlockPtr else_block;  // If else

  // Lenient-mode placeholder for an unsupported construct.
  bool opaque = false;

  // Inferred type annotation for VariableDecl statements (see
  // infer_local_types); not part of structural equality.
  PrimitiveType decl_type = PrimitiveType::Unknown;

  StmtPtr clone() const;
};

struct CodeBlock {
  NodeId id;
  std::vector<StmtPtr> statements;
  std::optional<CallableInfo> callable;

  BlockPtr clone() const;
  std::vector<VariableDeclInfo> locals() const;
};

enum class CodeContainerKind { Script, ClassBody };

struct CodeContainer {
  CodeContainerKind kind = CodeContainerKind::Script;
  std::vector<BlockPtr> blocks;  // a script has exactly one top-level block

  CodeContainer clone() const;
};

enum class ContainerKind { Directory, File };

struct Container {
  ContainerKind kind = ContainerKind::Directory;
  std::string path;  // relative to the injection root ("" for the root)
  std::uint32_t file_index = 0;  // meaningful for file containers
  std::vector<Container> children;
  std::vector<CodeContainer> code_containers;

  Container clone() const;
};

struct ClassDecl {
  std::string name;
  std::vector<std::pair<std::string, PrimitiveType>> properties;
};

struct CodeModel {
  std::vector<Container> containers;
  std::vector<ClassDecl> classes;
  std::vector<VariableDeclInfo> globals;
  // Original source text per file index, used for span checks and raw copies.
  std::vector<std::string> sources;
  std::vector<std::string> file_paths;

  CodeModel clone() const;

  const Statement* find_statement(NodeId id) const;
  const Expr* find_expr(NodeId id) const;
};

// Walk helpers. Visitors return void; enumeration order is structural
// (statements in source order, expressions in evaluation order).
void for_each_statement(const CodeBlock& block,
                        const std::function<void(const Statement&)>& fn);
void for_each_statement(const CodeModel& model,
                        const std::function<void(const Statement&)>& fn);
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);
void for_each_stmt_expr(const Statement& s, const std::function<void(const Expr&)>& fn);

// Assigns dense pre-order NodeIds for every block, statement and expression
// of the container, using `file_index` as the id prefix.
void assign_node_ids(CodeContainer& container, std::uint32_t file_index);
void assign_node_ids(CodeModel& model);

// Derives block-local and model-global variable declaration summaries.
std::vector<VariableDeclInfo> collect_globals(const CodeModel& model);

}  // namespace sx
