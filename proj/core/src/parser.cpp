#include "schemaxray/parser.hpp"

#include <cassert>
#include <utility>

#include "lexer.hpp"

namespace sx {

using detail::Token;
using detail::TokenKind;

namespace {

ExprPtr make_expr(ExprKind kind) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  return e;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path, ParseMode mode,
         std::string source, DiagnosticList& diags)
      : tokens_(std::move(tokens)), path_(std::move(path)), mode_(mode),
        source_(std::move(source)), diags_(diags) {}

  CodeContainer parse_script() {
    CodeContainer container;
    container.kind = CodeContainerKind::Script;
    auto block = std::make_unique<CodeBlock>();
    while (!peek().is(TokenKind::EndOfFile)) {
      if (peek().is_punct(";")) {  // stray semicolon
        next();
        continue;
      }
      auto stmt = parse_statement_recovering();
      if (stmt) block->statements.push_back(std::move(stmt));
    }
    container.blocks.push_back(std::move(block));
    return container;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    if (i >= tokens_.size()) i = tokens_.size() - 1;
    return tokens_[i];
  }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    throw SyntaxError(message, path_, t.line, t.column);
  }

  void expect_punct(const char* p) {
    if (!peek().is_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }

  SourceSpan span_from(const Token& start) const {
    const Token& last = tokens_[pos_ > 0 ? pos_ - 1 : 0];
    SourceSpan s;
    s.line = start.line;
    s.column = start.column;
    s.offset = start.offset;
    s.length = last.offset + last.length - start.offset;
    return s;
  }

  // --- statement level ------------------------------------------------

  StmtPtr parse_statement_recovering() {
    std::size_t start_pos = pos_;
    if (mode_ == ParseMode::Strict) return parse_statement();
    try {
      return parse_statement();
    } catch (const SyntaxError& err) {
      pos_ = start_pos;
      return recover_opaque(err);
    }
  }

  StmtPtr parse_statement() {
    const Token& t = peek();
    if (t.is(TokenKind::Keyword)) {
      const std::string& kw = t.text;
      if (kw == "const" || kw == "let" || kw == "var") return parse_var_decl();
      if (kw == "function") return parse_function_decl();
      if (kw == "if") return parse_if();
      if (kw == "while") return parse_while();
      if (kw == "return") return parse_return();
      if (kw == "else") fail("'else' without matching 'if'");
      if (detail::is_reserved_unsupported(kw))
        fail("unsupported statement '" + kw + "'");
      // true/false/null/new start an expression statement
    }
    if (t.is_punct("{")) fail("bare block statements are not supported");
    return parse_expr_or_assignment();
  }

  // Replaces an unsupported statement by an opaque ExpressionStmt holding the
  // raw text, per lenient mode; unbalanced delimiters still abort.
  StmtPtr recover_opaque(const SyntaxError& err) {
    const Token& start = peek();
    if (start.is(TokenKind::EndOfFile)) throw err;
    int depth = 0;
    bool consumed_any = false;
    while (!peek().is(TokenKind::EndOfFile)) {
      const Token& t = peek();
      if (t.is(TokenKind::Punct)) {
        const std::string& p = t.text;
        if (p == "(" || p == "[" || p == "{") {
          ++depth;
        } else if (p == ")" || p == "]" || p == "}") {
          if (depth == 0) break;  // closes an enclosing block
          --depth;
          next();
          consumed_any = true;
          if (depth == 0 && p == "}") {
            // End of a braced construct; stop unless an expression continues.
            if (peek().is_punct(";")) next();
            if (!looks_like_expression_continuation()) break;
          }
          continue;
        } else if (p == ";" && depth == 0) {
          next();
          consumed_any = true;
          break;
        }
      }
      next();
      consumed_any = true;
    }
    if (!consumed_any) throw err;

    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::ExpressionStmt;
    stmt->opaque = true;
    stmt->span = span_from(start);
    auto raw = make_expr(ExprKind::Literal);
    raw->literal_kind = LiteralKind::String;
    raw->lexeme = source_.substr(static_cast<std::size_t>(stmt->span.offset),
                                 static_cast<std::size_t>(stmt->span.length));
    stmt->expr = std::move(raw);

    Diagnostic d;
    d.severity = Severity::Warning;
    d.code = "lenient";
    d.message = "unsupported construct replaced by opaque statement: " +
                std::string(err.what());
    d.file = path_;
    d.line = stmt->span.line;
    d.column = stmt->span.column;
    diags_.push_back(std::move(d));
    return stmt;
  }

  bool looks_like_expression_continuation() const {
    const Token& t = peek();
    if (!t.is(TokenKind::Punct)) return false;
    return t.text == "=" || t.text == "." || t.text == "+" || t.text == "-" ||
           t.text == "&&" || t.text == "||" || t.text == "(" || t.text == "[";
  }

  StmtPtr parse_var_decl() {
    const Token& start = peek();
    next();  // const/let/var
    if (!peek().is(TokenKind::Ident)) fail("expected identifier after declaration keyword");
    std::string name = next().text;
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::VariableDecl;
    stmt->name = std::move(name);
    if (peek().is_punct("=")) {
      next();
      stmt->expr = parse_expr();
    }
    finish_statement();
    stmt->span = span_from(start);
    return stmt;
  }

  StmtPtr parse_function_decl() {
    const Token& start = peek();
    next();  // function
    if (!peek().is(TokenKind::Ident)) fail("expected function name");
    std::string name = next().text;
    auto lambda = make_expr(ExprKind::Lambda);
    lambda->anonymous = false;
    lambda->params = parse_param_list();
    lambda->body = parse_block();
    attach_callable_info(*lambda);
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::VariableDecl;
    stmt->name = std::move(name);
    stmt->expr = std::move(lambda);
    if (peek().is_punct(";")) next();
    stmt->span = span_from(start);
    return stmt;
  }

  StmtPtr parse_if() {
    const Token& start = peek();
    next();  // if
    expect_punct("(");
    auto cond = parse_expr();
    expect_punct(")");
    auto then_block = parse_block_or_single();
    BlockPtr else_block;
    if (peek().is_keyword("else")) {
      next();
      if (peek().is_keyword("if")) {
        auto nested = parse_if();
        else_block = std::make_unique<CodeBlock>();
        else_block->statements.push_back(std::move(nested));
      } else {
        else_block = parse_block_or_single();
      }
    }
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::If;
    stmt->cond = std::move(cond);
    stmt->then_block = std::move(then_block);
    stmt->else_block = std::move(else_block);
    stmt->span = span_from(start);
    return stmt;
  }

  StmtPtr parse_while() {
    const Token& start = peek();
    next();  // while
    expect_punct("(");
    auto cond = parse_expr();
    expect_punct(")");
    auto body = parse_block_or_single();
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::While;
    stmt->cond = std::move(cond);
    stmt->then_block = std::move(body);
    stmt->span = span_from(start);
    return stmt;
  }

  StmtPtr parse_return() {
    const Token& start = peek();
    next();  // return
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::Return;
    if (!peek().is_punct(";") && !peek().is_punct("}") &&
        !peek().is(TokenKind::EndOfFile)) {
      stmt->expr = parse_expr();
    }
    finish_statement();
    stmt->span = span_from(start);
    return stmt;
  }

  StmtPtr parse_expr_or_assignment() {
    const Token& start = peek();
    auto expr = parse_expr();
    if (peek().is_punct("=")) {
      if (expr->kind != ExprKind::VarAccess &&
          expr->kind != ExprKind::PropertyAccess &&
          expr->kind != ExprKind::IndexAccess) {
        fail("invalid assignment target");
      }
      next();
      auto value = parse_expr();
      finish_statement();
      auto stmt = std::make_unique<Statement>();
      stmt->kind = StmtKind::Assignment;
      stmt->target = std::move(expr);
      stmt->value = std::move(value);
      stmt->span = span_from(start);
      return stmt;
    }
    finish_statement();
    auto stmt = std::make_unique<Statement>();
    stmt->kind = StmtKind::ExpressionStmt;
    stmt->expr = std::move(expr);
    stmt->span = span_from(start);
    return stmt;
  }

  // Consumes the statement terminator: ';' when present, or accepts an
  // implicit end before '}' / EOF.
  void finish_statement() {
    if (peek().is_punct(";")) {
      next();
      return;
    }
    if (peek().is_punct("}") || peek().is(TokenKind::EndOfFile)) return;
    fail("expected ';'");
  }

  BlockPtr parse_block() {
    expect_punct("{");
    auto block = std::make_unique<CodeBlock>();
    while (!peek().is_punct("}")) {
      if (peek().is(TokenKind::EndOfFile)) fail("unexpected end of file in block");
      if (peek().is_punct(";")) {
        next();
        continue;
      }
      auto stmt = parse_statement_recovering();
      if (stmt) block->statements.push_back(std::move(stmt));
    }
    next();  // }
    return block;
  }

  BlockPtr parse_block_or_single() {
    if (peek().is_punct("{")) return parse_block();
    auto block = std::make_unique<CodeBlock>();
    block->statements.push_back(parse_statement());
    return block;
  }

  // --- expression level -----------------------------------------------

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (peek().is_punct("||")) {
      next();
      auto e = make_expr(ExprKind::Binary);
      e->op = BinaryOp::Or;
      e->lhs = std::move(lhs);
      e->rhs = parse_and();
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_equality();
    while (peek().is_punct("&&")) {
      next();
      auto e = make_expr(ExprKind::Binary);
      e->op = BinaryOp::And;
      e->lhs = std::move(lhs);
      e->rhs = parse_equality();
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    auto lhs = parse_relational();
    while (peek().is_punct("==") || peek().is_punct("===") ||
           peek().is_punct("!=") || peek().is_punct("!==")) {
      std::string op = next().text;
      auto e = make_expr(ExprKind::Binary);
      e->op = op == "===" ? BinaryOp::StrictEq
              : op == "==" ? BinaryOp::Eq
                           : BinaryOp::Neq;  // '!==' folds into '!='
      e->lhs = std::move(lhs);
      e->rhs = parse_relational();
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    auto lhs = parse_additive();
    while (peek().is_punct(">=") || peek().is_punct("<=") ||
           peek().is_punct(">") || peek().is_punct("<")) {
      std::string op = next().text;
      auto e = make_expr(ExprKind::Binary);
      e->op = op == ">=" ? BinaryOp::Ge
              : op == "<=" ? BinaryOp::Le
              : op == ">" ? BinaryOp::Gt
                          : BinaryOp::Lt;
      e->lhs = std::move(lhs);
      e->rhs = parse_additive();
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    auto lhs = parse_unary();
    while (peek().is_punct("+") || peek().is_punct("-")) {
      std::string op = next().text;
      auto e = make_expr(ExprKind::Binary);
      e->op = op == "+" ? BinaryOp::Add : BinaryOp::Sub;
      e->lhs = std::move(lhs);
      e->rhs = parse_unary();
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().is_punct("-")) {
      if (peek(1).is(TokenKind::Number)) {
        next();
        const Token& num = next();
        auto e = make_expr(ExprKind::Literal);
        e->literal_kind = num.is_double ? LiteralKind::Double : LiteralKind::Int;
        e->lexeme = "-" + num.text;
        return e;
      }
      fail("unary '-' is only supported on numeric literals");
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    auto expr = parse_primary();
    for (;;) {
      if (peek().is_punct(".")) {
        next();
        if (!peek().is(TokenKind::Ident) && !peek().is(TokenKind::Keyword))
          fail("expected property name after '.'");
        std::string member = next().text;
        if (peek().is_punct("(")) {
          auto call = make_expr(ExprKind::Call);
          call->name = std::move(member);
          call->object = std::move(expr);
          call->args = parse_arg_list();
          expr = std::move(call);
        } else {
          auto prop = make_expr(ExprKind::PropertyAccess);
          prop->name = std::move(member);
          prop->object = std::move(expr);
          expr = std::move(prop);
        }
        continue;
      }
      if (peek().is_punct("[")) {
        next();
        auto idx = parse_expr();
        expect_punct("]");
        auto access = make_expr(ExprKind::IndexAccess);
        access->object = std::move(expr);
        access->index = std::move(idx);
        expr = std::move(access);
        continue;
      }
      if (peek().is_punct("(")) {
        // Direct invocation: only plain function names are callable.
        if (expr->kind != ExprKind::VarAccess)
          fail("only named functions and methods can be called");
        auto call = make_expr(ExprKind::Call);
        call->name = expr->name;
        call->object = nullptr;
        call->args = parse_arg_list();
        expr = std::move(call);
        continue;
      }
      break;
    }
    return expr;
  }

  std::vector<ExprPtr> parse_arg_list() {
    expect_punct("(");
    std::vector<ExprPtr> args;
    if (!peek().is_punct(")")) {
      for (;;) {
        args.push_back(parse_expr());
        if (peek().is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    return args;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();

    if (t.is(TokenKind::Number)) {
      next();
      auto e = make_expr(ExprKind::Literal);
      e->literal_kind = t.is_double ? LiteralKind::Double : LiteralKind::Int;
      e->lexeme = t.text;
      return e;
    }
    if (t.is(TokenKind::String)) {
      next();
      auto e = make_expr(ExprKind::Literal);
      e->literal_kind = LiteralKind::String;
      e->lexeme = t.text;
      return e;
    }
    if (t.is_keyword("true") || t.is_keyword("false")) {
      next();
      auto e = make_expr(ExprKind::Literal);
      e->literal_kind = LiteralKind::Bool;
      e->lexeme = t.text;
      return e;
    }
    if (t.is_keyword("null")) {
      next();
      auto e = make_expr(ExprKind::Literal);
      e->literal_kind = LiteralKind::Null;
      e->lexeme = "null";
      return e;
    }
    if (t.is_keyword("new")) return parse_new();
    if (t.is_keyword("function")) return parse_function_expr();
    if (t.is(TokenKind::Keyword) && detail::is_reserved_unsupported(t.text))
      fail("unsupported expression '" + t.text + "'");

    if (t.is(TokenKind::Ident)) {
      if (peek(1).is_punct("=>")) return parse_arrow_single_param();
      next();
      auto e = make_expr(ExprKind::VarAccess);
      e->name = t.text;
      return e;
    }
    if (t.is_punct("(")) {
      if (is_arrow_ahead()) return parse_arrow_paren_params();
      next();
      auto inner = parse_expr();
      expect_punct(")");
      return inner;  // grouping is transparent
    }
    if (t.is_punct("{")) return parse_object_literal();
    if (t.is_punct("[")) return parse_array_literal();

    fail("expected expression");
  }

  ExprPtr parse_new() {
    next();  // new
    if (!peek().is(TokenKind::Ident)) fail("expected class name after 'new'");
    auto e = make_expr(ExprKind::New);
    e->name = next().text;
    if (peek().is_punct("(")) e->args = parse_arg_list();
    return e;
  }

  ExprPtr parse_function_expr() {
    next();  // function
    if (peek().is(TokenKind::Ident)) fail("named function expressions are not supported");
    auto e = make_expr(ExprKind::Lambda);
    e->anonymous = true;
    e->params = parse_param_list();
    e->body = parse_block();
    attach_callable_info(*e);
    return e;
  }

  ExprPtr parse_arrow_single_param() {
    std::string param = next().text;
    next();  // =>
    auto e = make_expr(ExprKind::Lambda);
    e->anonymous = true;
    e->params.push_back(std::move(param));
    e->body = parse_arrow_body();
    attach_callable_info(*e);
    return e;
  }

  ExprPtr parse_arrow_paren_params() {
    auto e = make_expr(ExprKind::Lambda);
    e->anonymous = true;
    e->params = parse_param_list();
    expect_punct("=>");
    e->body = parse_arrow_body();
    attach_callable_info(*e);
    return e;
  }

  BlockPtr parse_arrow_body() {
    if (peek().is_punct("{")) return parse_block();
    // Expression-bodied arrow desugars to a block with a single return.
    const Token& start = peek();
    auto value = parse_expr();
    auto block = std::make_unique<CodeBlock>();
    auto ret = std::make_unique<Statement>();
    ret->kind = StmtKind::Return;
    ret->expr = std::move(value);
    ret->span = span_from(start);
    block->statements.push_back(std::move(ret));
    return block;
  }

  std::vector<std::string> parse_param_list() {
    expect_punct("(");
    std::vector<std::string> params;
    if (!peek().is_punct(")")) {
      for (;;) {
        if (!peek().is(TokenKind::Ident)) fail("expected parameter name");
        std::string p = next().text;
        for (const auto& existing : params)
          if (existing == p) fail("duplicate parameter name '" + p + "'");
        params.push_back(std::move(p));
        if (peek().is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    return params;
  }

  void attach_callable_info(Expr& lambda) const {
    assert(lambda.kind == ExprKind::Lambda && lambda.body);
    CallableInfo info;
    info.params = lambda.params;
    info.anonymous = lambda.anonymous;
    lambda.body->callable = std::move(info);
  }

  // Lookahead from '(' to the matching ')' to see whether '=>' follows.
  bool is_arrow_ahead() const {
    std::size_t i = pos_;
    int depth = 0;
    while (i < tokens_.size()) {
      const Token& t = tokens_[i];
      if (t.is(TokenKind::EndOfFile)) return false;
      if (t.is(TokenKind::Punct)) {
        if (t.text == "(") ++depth;
        else if (t.text == ")") {
          --depth;
          if (depth == 0) return i + 1 < tokens_.size() && tokens_[i + 1].is_punct("=>");
        }
      }
      ++i;
    }
    return false;
  }

  ExprPtr parse_object_literal() {
    expect_punct("{");
    auto e = make_expr(ExprKind::ObjectLiteral);
    if (!peek().is_punct("}")) {
      for (;;) {
        std::string key;
        if (peek().is(TokenKind::Ident) || peek().is(TokenKind::Keyword)) {
          key = next().text;
        } else if (peek().is(TokenKind::String)) {
          key = next().text;
        } else {
          fail("expected property key");
        }
        expect_punct(":");
        e->pairs.emplace_back(std::move(key), parse_expr());
        if (peek().is_punct(",")) {
          next();
          if (peek().is_punct("}")) break;  // trailing comma
          continue;
        }
        break;
      }
    }
    expect_punct("}");
    return e;
  }

  ExprPtr parse_array_literal() {
    expect_punct("[");
    auto e = make_expr(ExprKind::ArrayLiteral);
    if (!peek().is_punct("]")) {
      for (;;) {
        e->args.push_back(parse_expr());
        if (peek().is_punct(",")) {
          next();
          if (peek().is_punct("]")) break;
          continue;
        }
        break;
      }
    }
    expect_punct("]");
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string path_;
  ParseMode mode_;
  std::string source_;
  DiagnosticList& diags_;
};

}  // namespace

CodeContainer parse_source(const std::string& source, const std::string& path,
                           ParseMode mode, DiagnosticList& diags,
                           std::uint32_t file_index) {
  auto tokens = detail::tokenize(source, path);
  Parser parser(std::move(tokens), path, mode, source, diags);
  CodeContainer container = parser.parse_script();
  assign_node_ids(container, file_index);
  return container;
}

}  // namespace sx
