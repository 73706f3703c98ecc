#include <algorithm>
#include <functional>
#include <set>

#include "path_analysis.hpp"
#include "schemaxray/parser.hpp"
#include "schemaxray/printer.hpp"
#include "schemaxray/refactor.hpp"

namespace sx {

namespace {

// --- mutable model navigation -------------------------------------------

struct Located {
  Statement* stmt = nullptr;
  CodeBlock* parent = nullptr;
  std::size_t position = 0;
};

void walk_blocks(CodeBlock& block, const std::function<void(CodeBlock&)>& fn);

void walk_expr_blocks(Expr& e, const std::function<void(CodeBlock&)>& fn) {
  if (e.body) walk_blocks(*e.body, fn);
  if (e.object) walk_expr_blocks(*e.object, fn);
  if (e.index) walk_expr_blocks(*e.index, fn);
  if (e.lhs) walk_expr_blocks(*e.lhs, fn);
  if (e.rhs) walk_expr_blocks(*e.rhs, fn);
  for (auto& a : e.args) walk_expr_blocks(*a, fn);
  for (auto& [k, v] : e.pairs) walk_expr_blocks(*v, fn);
}

void walk_blocks(CodeBlock& block, const std::function<void(CodeBlock&)>& fn) {
  fn(block);
  for (auto& s : block.statements) {
    if (s->expr) walk_expr_blocks(*s->expr, fn);
    if (s->target) walk_expr_blocks(*s->target, fn);
    if (s->value) walk_expr_blocks(*s->value, fn);
    if (s->cond) walk_expr_blocks(*s->cond, fn);
    if (s->then_block) walk_blocks(*s->then_block, fn);
    if (s->else_block) walk_blocks(*s->else_block, fn);
  }
}

void walk_model_blocks(CodeModel& model, const std::function<void(CodeBlock&)>& fn) {
  std::function<void(Container&)> visit = [&](Container& c) {
    for (auto& cc : c.code_containers)
      for (auto& b : cc.blocks) walk_blocks(*b, fn);
    for (auto& child : c.children) visit(child);
  };
  for (auto& c : model.containers) visit(c);
}

Located locate_statement(CodeModel& model, NodeId id) {
  Located out;
  walk_model_blocks(model, [&](CodeBlock& block) {
    if (out.stmt) return;
    for (std::size_t i = 0; i < block.statements.size(); ++i) {
      if (block.statements[i]->id == id) {
        out.stmt = block.statements[i].get();
        out.parent = &block;
        out.position = i;
        return;
      }
    }
  });
  return out;
}

Expr* find_expr_in_stmt(Statement& s, NodeId id);

Expr* find_expr_mut(Expr& e, NodeId id) {
  if (e.id == id) return &e;
  if (e.object)
    if (Expr* f = find_expr_mut(*e.object, id)) return f;
  if (e.index)
    if (Expr* f = find_expr_mut(*e.index, id)) return f;
  if (e.lhs)
    if (Expr* f = find_expr_mut(*e.lhs, id)) return f;
  if (e.rhs)
    if (Expr* f = find_expr_mut(*e.rhs, id)) return f;
  for (auto& a : e.args)
    if (Expr* f = find_expr_mut(*a, id)) return f;
  for (auto& [k, v] : e.pairs)
    if (Expr* f = find_expr_mut(*v, id)) return f;
  if (e.body) {
    for (auto& s : e.body->statements)
      if (Expr* f = find_expr_in_stmt(*s, id)) return f;
  }
  return nullptr;
}

Expr* find_expr_in_stmt(Statement& s, NodeId id) {
  for (Expr* root : {s.expr.get(), s.target.get(), s.value.get(), s.cond.get()})
    if (root)
      if (Expr* f = find_expr_mut(*root, id)) return f;
  for (CodeBlock* block : {s.then_block.get(), s.else_block.get()}) {
    if (!block) continue;
    for (auto& nested : block->statements)
      if (Expr* f = find_expr_in_stmt(*nested, id)) return f;
  }
  return nullptr;
}

// --- rewrite helpers -------------------------------------------------------

ExprPtr make_property_access(ExprPtr object, const std::string& name) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::PropertyAccess;
  e->name = name;
  e->object = std::move(object);
  return e;
}

bool is_var(const Expr& e, const std::string& name) {
  return e.kind == ExprKind::VarAccess && e.name == name;
}

// The expression node to rewrite: the first property access above the root
// variable (an index between them selects a result document and is dropped).
// Returns the node and the accessed field name.
struct ChainHead {
  Expr* node = nullptr;
  std::string field;
};

ChainHead chain_head(Expr& e, const std::string& root) {
  if (e.kind == ExprKind::PropertyAccess && e.object) {
    const Expr& obj = *e.object;
    if (is_var(obj, root)) return {&e, e.name};
    if (obj.kind == ExprKind::IndexAccess && obj.object && is_var(*obj.object, root))
      return {&e, e.name};
  }
  return {};
}

// Mapping from a source field name to its rewritten access.
struct FieldRewrite {
  std::string new_name;  // single-field entries
  bool nested = false;   // multi-field entries: stem object keeps field names
  std::string stem;
};

class SequentialRewriter {
 public:
  SequentialRewriter(const std::string& join_var, const Expr& base,
                     std::map<std::string, FieldRewrite> fields,
                     std::vector<std::string> removed_params)
      : join_var_(join_var), base_(base), fields_(std::move(fields)),
        removed_params_(std::move(removed_params)) {}

  void rewrite_block(CodeBlock& block) {
    for (auto& s : block.statements) rewrite_stmt(*s);
  }

 private:
  void rewrite_stmt(Statement& s) {
    for (ExprPtr* root : {&s.expr, &s.target, &s.value, &s.cond})
      if (*root) rewrite_expr(*root);
    if (s.then_block) rewrite_block(*s.then_block);
    if (s.else_block) rewrite_block(*s.else_block);
  }

  void rewrite_expr(ExprPtr& slot) {
    Expr& e = *slot;

    if (is_var(e, join_var_))
      throw RewriteError("join result variable '" + join_var_ +
                         "' is used directly and cannot be rewritten");
    for (const auto& p : removed_params_) {
      if (is_var(e, p))
        throw RewriteError("callback parameter '" + p +
                           "' is referenced by the moved block");
    }

    ChainHead head = chain_head(e, join_var_);
    if (head.node) {
      auto it = fields_.find(head.field);
      if (it == fields_.end())
        throw RewriteError("field '" + head.field +
                           "' of the join result is not part of the duplication plan");
      ExprPtr replacement = build_access(it->second, head.field);
      slot = std::move(replacement);
      return;
    }

    for (ExprPtr* child : {&e.object, &e.index, &e.lhs, &e.rhs})
      if (*child) rewrite_expr(*child);
    for (auto& a : e.args) rewrite_expr(a);
    for (auto& [k, v] : e.pairs) rewrite_expr(v);
    if (e.body) rewrite_block(*e.body);
  }

  ExprPtr build_access(const FieldRewrite& fr, const std::string& field) const {
    ExprPtr base = base_.clone();
    if (fr.nested)
      return make_property_access(make_property_access(std::move(base), fr.stem), field);
    return make_property_access(std::move(base), fr.new_name);
  }

  std::string join_var_;
  const Expr& base_;
  std::map<std::string, FieldRewrite> fields_;
  std::vector<std::string> removed_params_;
};

class AggregationRewriter {
 public:
  struct AsRewrite {
    std::map<std::string, FieldRewrite> fields;
  };

  AggregationRewriter(std::string result_var, std::map<std::string, AsRewrite> by_as)
      : result_var_(std::move(result_var)), by_as_(std::move(by_as)) {}

  void rewrite_block(CodeBlock& block) {
    for (auto& s : block.statements) rewrite_stmt(*s);
  }

 private:
  void rewrite_stmt(Statement& s) {
    for (ExprPtr* root : {&s.expr, &s.target, &s.value, &s.cond})
      if (*root) rewrite_expr(*root);
    if (s.then_block) rewrite_block(*s.then_block);
    if (s.else_block) rewrite_block(*s.else_block);
  }

  // Matches <base>.<as>[idx]?.<field> where <base> bottoms at the result
  // variable, and rewrites it to the duplicated access.
  void rewrite_expr(ExprPtr& slot) {
    Expr& e = *slot;
    if (e.kind == ExprKind::PropertyAccess && e.object) {
      Expr* as_node = e.object.get();
      if (as_node->kind == ExprKind::IndexAccess && as_node->object)
        as_node = as_node->object.get();
      if (as_node->kind == ExprKind::PropertyAccess &&
          rooted_in_result(*as_node->object)) {
        auto it = by_as_.find(as_node->name);
        if (it != by_as_.end()) {
          auto fit = it->second.fields.find(e.name);
          if (fit == it->second.fields.end())
            throw RewriteError("field '" + e.name + "' of $lookup output '" +
                               as_node->name + "' is not part of the duplication plan");
          const FieldRewrite& fr = fit->second;
          ExprPtr base = as_node->object->clone();
          ExprPtr replacement =
              fr.nested
                  ? make_property_access(
                        make_property_access(std::move(base), fr.stem), e.name)
                  : make_property_access(std::move(base), fr.new_name);
          slot = std::move(replacement);
          return;
        }
      }
    }

    for (ExprPtr* child : {&e.object, &e.index, &e.lhs, &e.rhs})
      if (*child) rewrite_expr(*child);
    for (auto& a : e.args) rewrite_expr(a);
    for (auto& [k, v] : e.pairs) rewrite_expr(v);
    if (e.body) rewrite_block(*e.body);
  }

  bool rooted_in_result(const Expr& e) const {
    const Expr* cur = &e;
    while (cur) {
      if (is_var(*cur, result_var_)) return true;
      if (cur->kind == ExprKind::PropertyAccess || cur->kind == ExprKind::IndexAccess) {
        cur = cur->object.get();
        continue;
      }
      return false;
    }
    return false;
  }

  std::string result_var_;
  std::map<std::string, AsRewrite> by_as_;
};

// --- schema update ----------------------------------------------------------

void add_duplicated_features(USchemaModel& schema, const JoinRemovalPlan& plan,
                             std::vector<FileChange>& report) {
  for (const auto& entry : plan.entries) {
    EntityType* entity = schema.find_entity(entry.destination_entity);
    if (!entity || entity->variations.empty())
      throw RewriteError("destination entity '" + entry.destination_entity +
                         "' is missing from the schema");
    StructuralVariation& variation = entity->variations.front();

    auto feature_exists = [&](const std::string& name) {
      for (const auto& f : variation.features)
        if (f.name == name) return true;
      return false;
    };
    auto unique_name = [&](std::string name) {
      if (!feature_exists(name)) return name;
      report.push_back({"schema", "name collision on '" + name +
                                      "' in " + entry.destination_entity +
                                      "; using '" + name + "_dup'"});
      return name + "_dup";
    };

    if (entry.fields.size() == 1) {
      Feature f;
      f.kind = FeatureKind::Attribute;
      f.name = unique_name(entry.new_names.front());
      f.type = entry.field_types.front();
      variation.features.push_back(std::move(f));
      continue;
    }

    // Multiple fields from one referenced entity become an embedded object.
    std::string embedded_name = entity_name_for(entry.stem);
    if (schema.find_entity(embedded_name)) embedded_name += "Copy";
    EntityType embedded;
    embedded.name = embedded_name;
    embedded.root = false;
    StructuralVariation v;
    v.id = 1;
    for (std::size_t i = 0; i < entry.fields.size(); ++i) {
      Feature f;
      f.kind = FeatureKind::Attribute;
      f.name = entry.fields[i];
      f.type = entry.field_types[i];
      v.features.push_back(std::move(f));
    }
    embedded.variations.push_back(std::move(v));
    schema.entity_types.push_back(std::move(embedded));

    Feature agg;
    agg.kind = FeatureKind::Aggregate;
    agg.name = unique_name(entry.stem);
    agg.target = embedded_name;
    agg.cardinality.lower = 0;
    agg.cardinality.upper = CardinalityUpper::One;
    schema.find_entity(entry.destination_entity)
        ->variations.front().features.push_back(std::move(agg));
  }
}

std::map<std::string, FieldRewrite> field_rewrites(const DuplicationEntry& entry) {
  std::map<std::string, FieldRewrite> out;
  for (std::size_t i = 0; i < entry.fields.size(); ++i) {
    FieldRewrite fr;
    if (entry.fields.size() == 1) {
      fr.new_name = entry.new_names[i];
    } else {
      fr.nested = true;
      fr.stem = entry.stem;
    }
    out[entry.fields[i]] = std::move(fr);
  }
  return out;
}

std::string file_path_of(const CodeModel& model, std::uint32_t file_index) {
  if (file_index < model.file_paths.size()) return model.file_paths[file_index];
  return "<unknown>";
}

void verify_regenerated(const CodeModel& model, std::uint32_t file_index) {
  std::function<const Container*(const Container&)> find_file =
      [&](const Container& c) -> const Container* {
    if (c.kind == ContainerKind::File && c.file_index == file_index) return &c;
    for (const auto& child : c.children)
      if (const Container* f = find_file(child)) return f;
    return nullptr;
  };
  const Container* file = nullptr;
  for (const auto& c : model.containers) {
    file = find_file(c);
    if (file) break;
  }
  if (!file || file->code_containers.empty())
    throw RewriteError("rewritten file container is missing");
  std::string text = regenerate(file->code_containers.front());
  DiagnosticList diags;
  try {
    parse_source(text, file->path, ParseMode::Strict, diags);
  } catch (const SyntaxError& err) {
    throw RewriteError(std::string("rewritten source does not re-parse: ") + err.what());
  }
}

}  // namespace

RefactorOutcome apply_plan(const JoinRemovalPlan& plan, const CodeModel& code,
                           const USchemaModel& schema, const ApiProfile& profile) {
  // Re-derive the plan set from the given code; the plan must still exist.
  ControlFlowModel cfg = build_cfg(code);
  DOSModel dos = extract_dos(cfg, code, profile);
  std::vector<JoinRemovalPlan> fresh_plans = build_plans(cfg, code, dos);
  const JoinRemovalPlan* fresh = nullptr;
  for (const auto& p : fresh_plans)
    if (p.id == plan.id) fresh = &p;
  if (!fresh)
    throw PlanStaleError("plan " + plan.id + " does not match the current code");
  if (fresh->partial)
    throw RewriteError("plan " + plan.id +
                       " is partial (the join result escapes the block) and cannot "
                       "be applied");

  const DatabaseOperation& join_op =
      dos.operations[static_cast<std::size_t>(fresh->join_op)];

  RefactorOutcome outcome;
  outcome.updated_code = code.clone();
  outcome.updated_schema = schema;

  Located located = locate_statement(outcome.updated_code, fresh->join_stmt);
  if (!located.stmt)
    throw PlanStaleError("join statement no longer resolves in the code model");
  Expr* call = find_expr_in_stmt(*located.stmt, join_op.call_expr);
  if (!call) throw PlanStaleError("join call no longer resolves in the code model");
  const ProfileEntry* entry = profile.match(call->name);
  if (!entry) throw PlanStaleError("join call method no longer matches the profile");

  if (fresh->join_type == "sequential") {
    if (entry->callback_arg < 0 ||
        static_cast<std::size_t>(entry->callback_arg) >= call->args.size() ||
        call->args[static_cast<std::size_t>(entry->callback_arg)]->kind !=
            ExprKind::Lambda)
      throw RewriteError("join call has no callback block to inline");
    Expr& lambda = *call->args[static_cast<std::size_t>(entry->callback_arg)];

    const DuplicationEntry& dup = fresh->entries.front();
    Expr* base_expr = find_expr_in_stmt(*located.stmt, dup.rewrite_base_expr);
    if (!base_expr)
      throw PlanStaleError("join filter expression no longer resolves");
    // The base is the filter path minus its reference-field leaf.
    ExprPtr base = (base_expr->kind == ExprKind::PropertyAccess && base_expr->object)
                       ? base_expr->object->clone()
                       : base_expr->clone();

    std::string join_var = join_op.result_variable.value_or("");
    std::vector<std::string> removed_params;
    for (const auto& p : lambda.params)
      if (p != join_var) removed_params.push_back(p);

    // Detach the callback body, rewrite it, then splice it in place of the
    // join statement.
    std::vector<StmtPtr> body = std::move(lambda.body->statements);
    SequentialRewriter rewriter(join_var, *base, field_rewrites(dup), removed_params);
    for (auto& s : body) {
      CodeBlock scratch;
      scratch.statements.push_back(std::move(s));
      rewriter.rewrite_block(scratch);
      s = std::move(scratch.statements.front());
    }

    auto& stmts = located.parent->statements;
    stmts.erase(stmts.begin() + static_cast<std::ptrdiff_t>(located.position));
    stmts.insert(stmts.begin() + static_cast<std::ptrdiff_t>(located.position),
                 std::make_move_iterator(body.begin()),
                 std::make_move_iterator(body.end()));

    outcome.report.push_back(
        {file_path_of(code, fresh->join_stmt.file()),
         "removed join read on '" + join_op.container + "' and inlined its callback"});
  } else {
    // Aggregation: delete the $lookup (and matching $unwind) stages, then
    // redirect the lookup-output accesses.
    if (entry->filter_arg < 0 ||
        static_cast<std::size_t>(entry->filter_arg) >= call->args.size())
      throw RewriteError("aggregate call has no pipeline argument");
    Expr& pipeline = *call->args[static_cast<std::size_t>(entry->filter_arg)];
    if (pipeline.kind != ExprKind::ArrayLiteral)
      throw RewriteError("aggregate pipeline is not an array literal");

    std::set<std::string> removed_as;
    std::set<std::uint64_t> removed_stages;
    std::map<std::string, AggregationRewriter::AsRewrite> by_as;
    for (const auto& dup : fresh->entries) {
      if (dup.lookup < 0) continue;
      const LookupJoin& lookup =
          join_op.lookups[static_cast<std::size_t>(dup.lookup)];
      removed_as.insert(lookup.as);
      removed_stages.insert(lookup.stage.value);
      by_as[lookup.as].fields = field_rewrites(dup);
    }

    auto& stages = pipeline.args;
    stages.erase(
        std::remove_if(
            stages.begin(), stages.end(),
            [&](const ExprPtr& stage) {
              if (removed_stages.count(stage->id.value)) return true;
              if (stage->kind == ExprKind::ObjectLiteral && !stage->pairs.empty() &&
                  stage->pairs.front().first == "$unwind") {
                const Expr& v = *stage->pairs.front().second;
                if (v.kind == ExprKind::Literal &&
                    v.literal_kind == LiteralKind::String && !v.lexeme.empty() &&
                    v.lexeme[0] == '$' && removed_as.count(v.lexeme.substr(1)))
                  return true;
              }
              return false;
            }),
        stages.end());

    std::string result_var = join_op.result_variable.value_or("");
    AggregationRewriter rewriter(result_var, std::move(by_as));
    // Rewrites apply to the whole enclosing block (the callback lives inside
    // the same statement).
    CodeBlock scratch;
    scratch.statements.push_back(std::move(
        located.parent->statements[located.position]));
    rewriter.rewrite_block(scratch);
    located.parent->statements[located.position] = std::move(scratch.statements.front());

    outcome.report.push_back(
        {file_path_of(code, fresh->join_stmt.file()),
         "removed " + std::to_string(removed_stages.size()) +
             " $lookup stage(s) from the aggregate on '" + join_op.container + "'"});
  }

  add_duplicated_features(outcome.updated_schema, *fresh, outcome.report);
  outcome.copy_statement = emit_copy(*fresh);
  outcome.migration_script = emit_migration(*fresh);
  verify_regenerated(outcome.updated_code, fresh->join_stmt.file());
  return outcome;
}

}  // namespace sx
