#include <algorithm>
#include <map>
#include <set>

#include "path_analysis.hpp"
#include "schemaxray/dos.hpp"
#include "schemaxray/printer.hpp"
#include "schemaxray/type_evidence.hpp"

namespace sx {

using detail::AnalysisIndex;

std::string VariablePath::render() const {
  std::string out = root;
  for (const auto& seg : segments) {
    if (seg.is_index)
      out += "[" + seg.index_text + "]";
    else
      out += "." + seg.name;
  }
  return out;
}

DosContainer* DOSModel::find_container(const std::string& name) {
  for (auto& c : containers)
    if (c.name == name) return &c;
  return nullptr;
}

const DosContainer* DOSModel::find_container(const std::string& name) const {
  for (const auto& c : containers)
    if (c.name == name) return &c;
  return nullptr;
}

DataStructure& DOSModel::structure(int id) {
  return structures[static_cast<std::size_t>(id)];
}

const DataStructure& DOSModel::structure(int id) const {
  return structures[static_cast<std::size_t>(id)];
}

DosField* DOSModel::find_field(int structure_id, const std::string& name) {
  for (auto& f : structure(structure_id).fields)
    if (f.name == name) return &f;
  return nullptr;
}

int DOSModel::join_count() const {
  int count = 0;
  for (const auto& op : operations)
    if (op.is_join) ++count;
  return count;
}

namespace {

// Shared state of one extraction run.
struct Extraction {
  const ControlFlowModel& cfg;
  const CodeModel& code;
  const ApiProfile& profile;
  const ExtractOptions& options;
  AnalysisIndex index;
  TypeEvidence evidence;
  DOSModel& dos;
  std::map<std::uint64_t, int> op_by_call;  // call expr id -> operation index

  Extraction(const ControlFlowModel& cfg_, const CodeModel& code_,
             const ApiProfile& profile_, const ExtractOptions& options_, DOSModel& dos_)
      : cfg(cfg_), code(code_), profile(profile_), options(options_),
        index(code_), evidence(gather_type_evidence(code_)), dos(dos_) {}

  void warn(const std::string& code_str, const std::string& message) {
    Diagnostic d;
    d.severity = Severity::Warning;
    d.code = code_str;
    d.message = message;
    dos.diagnostics.push_back(std::move(d));
  }
};

// --- container / structure management ----------------------------------

int new_structure(DOSModel& dos) {
  DataStructure ds;
  ds.id = static_cast<int>(dos.structures.size());
  dos.structures.push_back(std::move(ds));
  return dos.structures.back().id;
}

// Containers correspond to collections; every container carries the store's
// fixed `_id` key from the moment it is first seen.
int ensure_container(Extraction& ex, const std::string& name) {
  if (DosContainer* c = ex.dos.find_container(name)) return c->structures.front();
  DosContainer c;
  c.name = name;
  int ds = new_structure(ex.dos);
  c.structures.push_back(ds);
  ex.dos.containers.push_back(std::move(c));
  DosField id_field;
  id_field.name = "_id";
  id_field.type.base = DosBaseKind::Attribute;
  id_field.type.primitive = PrimitiveType::String;
  id_field.type.defaulted = true;
  ex.dos.structure(ds).fields.push_back(std::move(id_field));
  return ds;
}

DosField& ensure_field(Extraction& ex, int structure_id, const std::string& name) {
  if (DosField* f = ex.dos.find_field(structure_id, name)) return *f;
  DosField f;
  f.name = name;
  f.type.base = DosBaseKind::Attribute;
  f.type.primitive = PrimitiveType::String;
  f.type.defaulted = true;
  ex.dos.structure(structure_id).fields.push_back(std::move(f));
  return ex.dos.structure(structure_id).fields.back();
}

void merge_attribute_evidence(Extraction& ex, DosField& field, PrimitiveType evidence) {
  if (field.type.base != DosBaseKind::Attribute) return;  // structure knowledge wins
  if (evidence == PrimitiveType::Unknown) return;
  if (field.type.defaulted) {
    field.type.primitive = evidence;
    field.type.defaulted = false;
    return;
  }
  if (field.type.primitive == evidence) return;
  bool numeric = (field.type.primitive == PrimitiveType::Int ||
                  field.type.primitive == PrimitiveType::Double) &&
                 (evidence == PrimitiveType::Int || evidence == PrimitiveType::Double);
  if (numeric) {
    field.type.primitive = PrimitiveType::Double;  // int + double widens
    return;
  }
  ex.warn("types", "conflicting type evidence for field '" + field.name +
                       "'; falling back to the default type");
  field.type.primitive = PrimitiveType::String;
  field.type.defaulted = true;
}

// Ensures the field can hold an embedded structure and returns that
// structure's id. `as_collection` upgrades the field to a collection first.
int ensure_aggregate(Extraction& ex, int structure_id, const std::string& name,
                     bool as_collection) {
  DosField& field = ensure_field(ex, structure_id, name);
  if (as_collection) field.type.collection = true;
  if (field.type.base == DosBaseKind::Reference) return -1;  // references are final
  if (field.type.base != DosBaseKind::Aggregate) {
    field.type.base = DosBaseKind::Aggregate;
    field.type.structure = new_structure(ex.dos);
  }
  return field.type.structure;
}

// Adds the fields named by an access path (already relative to the
// structure) and refines types per the Aggregate/Collection/Attribute rules.
void add_path_fields(Extraction& ex, int structure_id,
                     const std::vector<PathSegment>& segs, std::size_t pos) {
  if (structure_id < 0 || pos >= segs.size()) return;
  const PathSegment& seg = segs[pos];
  if (seg.is_index) return;  // nested arrays beyond one level are not modeled
  const std::string& name = seg.name;

  bool has_more = pos + 1 < segs.size();
  if (!has_more) {
    DosField& field = ensure_field(ex, structure_id, name);
    merge_attribute_evidence(ex, field, ex.evidence.lookup(name));
    return;
  }

  const PathSegment& next = segs[pos + 1];
  if (next.is_index) {
    // Index notation: the field is a collection. A property access after the
    // index reveals embedded objects (collection of aggregates).
    bool element_props = pos + 2 < segs.size() && !segs[pos + 2].is_index;
    if (element_props) {
      int element = ensure_aggregate(ex, structure_id, name, /*as_collection=*/true);
      add_path_fields(ex, element, segs, pos + 2);
    } else {
      DosField& field = ensure_field(ex, structure_id, name);
      field.type.collection = true;
    }
    return;
  }

  // Property access after a property: embedded object.
  DosField& field = ensure_field(ex, structure_id, name);
  if (field.type.collection && field.type.base == DosBaseKind::Aggregate) {
    add_path_fields(ex, field.type.structure, segs, pos + 1);
    return;
  }
  int element = ensure_aggregate(ex, structure_id, name, /*as_collection=*/false);
  add_path_fields(ex, element, segs, pos + 1);
}

// --- operation creation -------------------------------------------------

std::optional<std::string> resolve_container_name(Extraction& ex, const Expr& call,
                                                  std::uint32_t file) {
  const Expr* cur = call.object.get();
  while (cur) {
    if (cur->kind == ExprKind::Call) {
      if (cur->name == ex.profile.container_method) {
        int arg_index = ex.profile.container_arg;
        if (arg_index < 0 || static_cast<std::size_t>(arg_index) >= cur->args.size())
          throw ProfileError("container call '" + cur->name + "' lacks argument " +
                             std::to_string(arg_index));
        const Expr& arg = *cur->args[static_cast<std::size_t>(arg_index)];
        if (arg.kind == ExprKind::Literal && arg.literal_kind == LiteralKind::String)
          return arg.lexeme;
        if (arg.kind == ExprKind::VarAccess) {
          if (const std::string* value = ex.index.string_const(file, arg.name))
            return *value;
        }
        throw ProfileError("container argument of '" + cur->name +
                           "' is not a string literal or resolvable constant");
      }
      cur = cur->object.get();
      continue;
    }
    if (cur->kind == ExprKind::PropertyAccess || cur->kind == ExprKind::IndexAccess) {
      cur = cur->object.get();
      continue;
    }
    break;
  }
  return std::nullopt;
}

std::optional<Predicate> normalize_filter(Extraction& ex, const Expr& filter) {
  if (filter.kind != ExprKind::ObjectLiteral) return std::nullopt;
  Predicate pred;
  for (const auto& [key, value] : filter.pairs) {
    if (!key.empty() && key[0] == '$') continue;  // operators are not conjuncts
    PredicateConjunct conjunct;
    conjunct.field_path = key;
    if (value->kind == ExprKind::Literal) {
      conjunct.rhs.is_literal = true;
      conjunct.rhs.literal_kind = value->literal_kind;
      conjunct.rhs.lexeme = value->lexeme;
      pred.conjuncts.push_back(std::move(conjunct));
      continue;
    }
    bool chained = false;
    std::set<std::string> roots = detail::root_vars(*value);
    for (const auto& root : roots) {
      auto paths = detail::paths_rooted_at(*value, root);
      for (auto& p : paths) {
        if (p.expr == value->id) {  // the rhs is exactly one access chain
          conjunct.rhs.is_literal = false;
          conjunct.rhs.path = p;
          pred.conjuncts.push_back(conjunct);
          chained = true;
          break;
        }
      }
      if (chained) break;
    }
    if (!chained && value->kind != ExprKind::ObjectLiteral) {
      ex.warn("filter", "unsupported filter value for '" + key + "' ignored");
    }
  }
  return pred;
}

void parse_pipeline(Extraction& ex, DatabaseOperation& op, const Expr& pipeline) {
  if (pipeline.kind != ExprKind::ArrayLiteral) return;
  for (const auto& stage : pipeline.args) {
    if (stage->kind != ExprKind::ObjectLiteral || stage->pairs.empty()) continue;
    const auto& [stage_name, stage_value] = stage->pairs.front();
    if (stage_name == "$lookup" && stage_value->kind == ExprKind::ObjectLiteral) {
      LookupJoin lookup;
      lookup.stage = stage->id;
      for (const auto& [k, v] : stage_value->pairs) {
        if (v->kind != ExprKind::Literal || v->literal_kind != LiteralKind::String) continue;
        if (k == "from") lookup.from = v->lexeme;
        else if (k == "localField") lookup.local_field = v->lexeme;
        else if (k == "foreignField") lookup.foreign_field = v->lexeme;
        else if (k == "as") lookup.as = v->lexeme;
      }
      if (lookup.from.empty() || lookup.local_field.empty() ||
          lookup.foreign_field.empty() || lookup.as.empty()) {
        ex.warn("pipeline", "incomplete $lookup stage ignored");
        continue;
      }
      op.lookups.push_back(std::move(lookup));
      continue;
    }
    if (stage_name == "$match") {
      if (auto pred = normalize_filter(ex, *stage_value)) {
        if (!op.filter) op.filter = Predicate{};
        for (auto& c : pred->conjuncts) op.filter->conjuncts.push_back(std::move(c));
      }
      continue;
    }
    if (stage_name == "$unwind" && stage_value->kind == ExprKind::Literal &&
        stage_value->literal_kind == LiteralKind::String) {
      std::string target = stage_value->lexeme;
      if (!target.empty() && target[0] == '$') target.erase(0, 1);
      op.unwinds.push_back(std::move(target));
    }
  }
}

std::optional<std::string> result_variable_of(Extraction& ex, const Expr& call,
                                              const ProfileEntry& entry,
                                              const Statement& stmt) {
  if (entry.result == ResultBinding::ReturnValue) {
    if (stmt.kind == StmtKind::VariableDecl) return stmt.name;
    if (stmt.kind == StmtKind::Assignment && stmt.target->kind == ExprKind::VarAccess)
      return stmt.target->name;
    return std::nullopt;
  }
  if (entry.callback_arg < 0 ||
      static_cast<std::size_t>(entry.callback_arg) >= call.args.size())
    return std::nullopt;
  const Expr& cb = *call.args[static_cast<std::size_t>(entry.callback_arg)];
  if (cb.kind != ExprKind::Lambda) return std::nullopt;
  if (static_cast<std::size_t>(entry.result_param) < cb.params.size())
    return cb.params[static_cast<std::size_t>(entry.result_param)];
  return std::nullopt;
}

std::vector<std::string> render_params(const Expr& call) {
  std::vector<std::string> out;
  for (const auto& a : call.args) {
    if (a->kind == ExprKind::Lambda) {
      std::string sig = "callback(";
      for (std::size_t i = 0; i < a->params.size(); ++i) {
        if (i) sig += ", ";
        sig += a->params[i];
      }
      sig += ")";
      out.push_back(std::move(sig));
    } else {
      out.push_back(regenerate_expr(*a));
    }
  }
  return out;
}

// --- backward traversal (operation + dependency discovery) --------------

DatabaseOperation create_operation(Extraction& ex, int cfg_node) {
  const CfgNode& node = ex.cfg.nodes[static_cast<std::size_t>(cfg_node)];
  const Expr* call = ex.index.expr(node.expr);
  const Statement* stmt = ex.index.stmt(node.stmt);
  const ProfileEntry* entry = ex.profile.match(call->name);

  auto container = resolve_container_name(ex, *call, node.stmt.file());
  if (!container)
    throw ProfileError("call '" + call->name + "' has no container in its receiver chain");

  DatabaseOperation op;
  op.kind = entry->kind;
  op.stmt = node.stmt;
  op.call_expr = node.expr;
  op.cfg_node = cfg_node;
  op.container = *container;
  op.result_variable = result_variable_of(ex, *call, *entry, *stmt);
  op.result_is_collection = entry->result_is_collection;
  op.params = render_params(*call);

  if (entry->kind == OpKind::AggregateRead) {
    if (entry->filter_arg >= 0 &&
        static_cast<std::size_t>(entry->filter_arg) < call->args.size())
      parse_pipeline(ex, op, *call->args[static_cast<std::size_t>(entry->filter_arg)]);
    if (!op.lookups.empty()) op.is_join = true;  // $lookup joins inside the engine
  } else if (entry->filter_arg >= 0 &&
             static_cast<std::size_t>(entry->filter_arg) < call->args.size()) {
    op.filter = normalize_filter(ex, *call->args[static_cast<std::size_t>(entry->filter_arg)]);
  }
  return op;
}

// Root variables of the call's non-callback arguments: the backward search
// list seeded per Algorithm 1.
std::set<std::string> argument_roots(const Expr& call) {
  std::set<std::string> roots;
  for (const auto& a : call.args) {
    if (a->kind == ExprKind::Lambda) continue;
    auto sub = detail::root_vars(*a);
    roots.insert(sub.begin(), sub.end());
  }
  return roots;
}

void backward_traverse_impl(Extraction& ex, const std::vector<int>& dbo_nodes) {
  for (int dbo_node : dbo_nodes) {
    DatabaseOperation op = create_operation(ex, dbo_node);
    int op_index = static_cast<int>(ex.dos.operations.size());
    ex.op_by_call[op.call_expr.value] = op_index;
    std::set<std::string> slist = argument_roots(*ex.index.expr(op.call_expr));
    ex.dos.operations.push_back(std::move(op));
    DatabaseOperation& dbo = ex.dos.operations.back();

    std::set<std::uint64_t> seen_stmts;
    for (int prev_node : backward_reachable(ex.cfg, dbo_node)) {
      const CfgNode& node = ex.cfg.nodes[static_cast<std::size_t>(prev_node)];

      if (node.kind == CfgNodeKind::Call) {
        auto it = ex.op_by_call.find(node.expr.value);
        if (it != ex.op_by_call.end()) {
          DatabaseOperation& prev_op = ex.dos.operations[static_cast<std::size_t>(it->second)];
          if (prev_op.result_variable && slist.count(*prev_op.result_variable)) {
            if (dbo.prev < 0 && prev_op.next < 0) {
              dbo.prev = it->second;
              prev_op.next = op_index;
              if (prev_op.container != dbo.container) dbo.is_join = true;
            } else if (dbo.prev < 0) {
              ex.warn("dependency", "operation on '" + dbo.container +
                                        "' depends on an operation that already has a "
                                        "successor; link skipped");
            }
            continue;
          }
        }
      }

      // Assignment alias: seeing `x = y` (or `let x = y`) with x in the
      // search list extends the search to y.
      if (!node.stmt.valid() || seen_stmts.count(node.stmt.value)) continue;
      seen_stmts.insert(node.stmt.value);
      const Statement* stmt = ex.index.stmt(node.stmt);
      if (!stmt) continue;
      const Expr* value = nullptr;
      std::string target_name;
      if (stmt->kind == StmtKind::VariableDecl && stmt->expr) {
        target_name = stmt->name;
        value = stmt->expr.get();
      } else if (stmt->kind == StmtKind::Assignment &&
                 stmt->target->kind == ExprKind::VarAccess) {
        target_name = stmt->target->name;
        value = stmt->value.get();
      }
      if (value && slist.count(target_name)) {
        auto roots = detail::root_vars(*value);
        slist.insert(roots.begin(), roots.end());
      }
    }
  }
}

// --- forward traversal (containers, structures, fields) -----------------

const LookupJoin* lookup_for_segment(const DatabaseOperation& op, const std::string& name) {
  for (const auto& l : op.lookups)
    if (l.as == name) return &l;
  return nullptr;
}

void record_access_path(Extraction& ex, DatabaseOperation& op, const VariablePath& path) {
  if (path.segments.empty()) return;
  std::size_t pos = 0;
  // find/aggregate results are arrays of documents: a leading index selects
  // one document and is not part of the structure.
  if (op.result_is_collection) {
    if (!path.segments[0].is_index) return;  // not attributable to a document field
    pos = 1;
    if (pos >= path.segments.size()) return;
  }

  // $lookup output fields route to the looked-up container's structure.
  if (op.kind == OpKind::AggregateRead && !path.segments[pos].is_index) {
    if (const LookupJoin* lookup = lookup_for_segment(op, path.segments[pos].name)) {
      std::size_t target_pos = pos + 1;
      if (target_pos < path.segments.size() && path.segments[target_pos].is_index)
        ++target_pos;  // as-arrays: genreList[0].name
      int target_ds = ensure_container(ex, lookup->from);
      std::vector<PathSegment> rest(path.segments.begin() +
                                        static_cast<std::ptrdiff_t>(target_pos),
                                    path.segments.end());
      add_path_fields(ex, target_ds, rest, 0);
      return;
    }
  }

  std::vector<PathSegment> rest(path.segments.begin() + static_cast<std::ptrdiff_t>(pos),
                                path.segments.end());
  add_path_fields(ex, op.result_structure, rest, 0);
}

void record_filter_fields(Extraction& ex, DatabaseOperation& op) {
  if (!op.filter) return;
  int ds = ex.dos.find_container(op.container)->structures.front();
  for (const auto& conjunct : op.filter->conjuncts) {
    std::vector<PathSegment> segs;
    std::string part;
    std::string path = conjunct.field_path;
    for (std::size_t i = 0; i <= path.size(); ++i) {
      if (i == path.size() || path[i] == '.') {
        if (!part.empty()) {
          PathSegment seg;
          seg.name = part;
          segs.push_back(std::move(seg));
          part.clear();
        }
      } else {
        part.push_back(path[i]);
      }
    }
    add_path_fields(ex, ds, segs, 0);
    // Literal comparisons type the filtered field directly.
    if (conjunct.rhs.is_literal && segs.size() == 1) {
      if (DosField* f = ex.dos.find_field(ds, segs[0].name))
        merge_attribute_evidence(ex, *f, literal_primitive(conjunct.rhs.literal_kind));
    }
  }
}

void mine_payload_object(Extraction& ex, int structure_id, const Expr& payload) {
  if (payload.kind != ExprKind::ObjectLiteral) return;
  for (const auto& [key, value] : payload.pairs) {
    if (!key.empty() && key[0] == '$') {
      mine_payload_object(ex, structure_id, *value);  // $set / $inc wrappers
      continue;
    }
    if (value->kind == ExprKind::Literal) {
      DosField& f = ensure_field(ex, structure_id, key);
      merge_attribute_evidence(ex, f, literal_primitive(value->literal_kind));
      continue;
    }
    if (value->kind == ExprKind::ObjectLiteral) {
      int nested = ensure_aggregate(ex, structure_id, key, /*as_collection=*/false);
      mine_payload_object(ex, nested, *value);
      continue;
    }
    if (value->kind == ExprKind::ArrayLiteral) {
      if (!value->args.empty() && value->args.front()->kind == ExprKind::ObjectLiteral) {
        int nested = ensure_aggregate(ex, structure_id, key, /*as_collection=*/true);
        mine_payload_object(ex, nested, *value->args.front());
      } else {
        DosField& f = ensure_field(ex, structure_id, key);
        f.type.collection = true;
        if (!value->args.empty() && value->args.front()->kind == ExprKind::Literal)
          merge_attribute_evidence(
              ex, f, literal_primitive(value->args.front()->literal_kind));
      }
      continue;
    }
    DosField& f = ensure_field(ex, structure_id, key);
    merge_attribute_evidence(ex, f, ex.evidence.lookup(key));
  }
}

void forward_traverse_impl(Extraction& ex) {
  for (auto& op : ex.dos.operations) {
    int ds = ensure_container(ex, op.container);
    record_filter_fields(ex, op);

    if (op.kind == OpKind::Insert || op.kind == OpKind::Update) {
      if (ex.options.payload_structures) {
        const Expr* call = ex.index.expr(op.call_expr);
        const ProfileEntry* entry = ex.profile.match(call->name);
        if (entry->payload_arg >= 0 &&
            static_cast<std::size_t>(entry->payload_arg) < call->args.size())
          mine_payload_object(ex, ds, *call->args[static_cast<std::size_t>(entry->payload_arg)]);
      }
      continue;
    }
    if (!op.is_read()) continue;

    op.result_structure = ds;
    if (!op.result_variable) continue;
    const std::string& result = *op.result_variable;

    std::set<std::uint64_t> seen_stmts;
    for (int node_index : forward_reachable(ex.cfg, op.cfg_node)) {
      const CfgNode& node = ex.cfg.nodes[static_cast<std::size_t>(node_index)];
      if (!node.stmt.valid() || seen_stmts.count(node.stmt.value)) continue;
      seen_stmts.insert(node.stmt.value);
      const Statement* stmt = ex.index.stmt(node.stmt);
      if (!stmt) continue;
      for (const VariablePath& path : detail::paths_rooted_at(*stmt, result))
        record_access_path(ex, op, path);
    }
  }
}

// --- reference creation ---------------------------------------------------

// Locates the field for a variable path in the given structure and returns
// (structure id, field) of the reference holder, or nullptr.
struct FieldLocation {
  int structure = -1;
  DosField* field = nullptr;
  std::vector<std::string> path;  // property names from the container root
};

FieldLocation locate_field(Extraction& ex, int structure_id,
                           const std::vector<PathSegment>& segs) {
  FieldLocation loc;
  int current = structure_id;
  DosField* field = nullptr;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const PathSegment& seg = segs[i];
    if (seg.is_index) continue;  // array selection keeps the current structure
    if (current < 0) return {};
    field = ex.dos.find_field(current, seg.name);
    if (!field) return {};
    loc.path.push_back(seg.name);
    loc.structure = current;
    if (field->type.base == DosBaseKind::Aggregate) current = field->type.structure;
  }
  loc.field = field;
  return loc;
}

void create_references_impl(Extraction& ex) {
  for (std::size_t op_index = 0; op_index < ex.dos.operations.size(); ++op_index) {
    DatabaseOperation& op = ex.dos.operations[op_index];
    if (!op.is_join || !op.is_read()) continue;

    // Aggregation joins: the join condition is the $lookup stage itself.
    if (op.kind == OpKind::AggregateRead) {
      for (std::size_t li = 0; li < op.lookups.size(); ++li) {
        const LookupJoin& lookup = op.lookups[li];
        ensure_container(ex, lookup.from);
        ReferenceLink link;
        link.join_op = static_cast<int>(op_index);
        link.lookup = static_cast<int>(li);
        if (lookup.foreign_field == "_id") {
          // local field references the foreign collection's key
          int ds = ex.dos.find_container(op.container)->structures.front();
          DosField& f = ensure_field(ex, ds, lookup.local_field);
          f.type.base = DosBaseKind::Reference;
          f.type.target_container = lookup.from;
          f.type.target_attribute = "_id";
          link.ref_container = op.container;
          link.ref_field_path = {lookup.local_field};
          link.target_container = lookup.from;
          link.target_attribute = "_id";
        } else {
          // reverse lookup: the foreign field holds ids of this container
          int ds = ensure_container(ex, lookup.from);
          DosField& f = ensure_field(ex, ds, lookup.foreign_field);
          f.type.base = DosBaseKind::Reference;
          f.type.target_container = op.container;
          f.type.target_attribute = lookup.local_field.empty() ? "_id" : lookup.local_field;
          link.ref_container = lookup.from;
          link.ref_field_path = {lookup.foreign_field};
          link.target_container = op.container;
          link.target_attribute = f.type.target_attribute;
          ensure_field(ex, ex.dos.find_container(op.container)->structures.front(),
                       link.target_attribute);
        }
        ex.dos.references.push_back(std::move(link));
      }
      continue;
    }

    // Sequential joins: resolve the predicate's variable side in the
    // previous operation's structure.
    if (op.prev < 0 || !op.filter) continue;
    DatabaseOperation& prev = ex.dos.operations[static_cast<std::size_t>(op.prev)];
    if (prev.result_structure < 0 || !prev.result_variable) continue;

    bool resolved = false;
    for (const auto& conjunct : op.filter->conjuncts) {
      if (conjunct.rhs.is_literal) continue;
      if (conjunct.rhs.path.root != *prev.result_variable) continue;

      FieldLocation loc = locate_field(ex, prev.result_structure,
                                       conjunct.rhs.path.segments);
      if (!loc.field) continue;
      loc.field->type.base = DosBaseKind::Reference;
      loc.field->type.target_container = op.container;
      loc.field->type.target_attribute = conjunct.field_path;
      loc.field->type.structure = -1;

      // Table 1 row 7: the join filter names the target's key field.
      int target_ds = ensure_container(ex, op.container);
      ensure_field(ex, target_ds, conjunct.field_path);

      ReferenceLink link;
      link.join_op = static_cast<int>(op_index);
      link.ref_container = prev.container;
      link.ref_field_path = loc.path;
      link.target_container = op.container;
      link.target_attribute = conjunct.field_path;
      ex.dos.references.push_back(std::move(link));
      resolved = true;
      break;
    }
    if (!resolved) {
      ex.warn("reference", "join predicate field could not be located in any "
                           "structure for operation on '" + op.container + "'");
    }
  }
}

// --- structure dedup ------------------------------------------------------

std::string structure_signature(const DOSModel& dos, int id,
                                std::vector<int>& visiting);

std::string type_signature(const DOSModel& dos, const DosFieldType& t,
                           std::vector<int>& visiting) {
  std::string sig = t.collection ? "[" : "";
  switch (t.base) {
    case DosBaseKind::Attribute:
      sig += "attr:" + to_string(t.primitive) + (t.defaulted ? "?" : "");
      break;
    case DosBaseKind::Aggregate:
      sig += "agg:" + structure_signature(dos, t.structure, visiting);
      break;
    case DosBaseKind::Reference:
      sig += "ref:" + t.target_container + "." + t.target_attribute;
      break;
  }
  if (t.collection) sig += "]";
  return sig;
}

std::string structure_signature(const DOSModel& dos, int id,
                                std::vector<int>& visiting) {
  if (id < 0) return "{}";
  for (int v : visiting)
    if (v == id) return "<cycle>";
  visiting.push_back(id);
  std::vector<std::string> parts;
  for (const auto& f : dos.structure(id).fields)
    parts.push_back(f.name + "=" + type_signature(dos, f.type, visiting));
  visiting.pop_back();
  std::sort(parts.begin(), parts.end());
  std::string sig = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) sig += ",";
    sig += parts[i];
  }
  sig += "}";
  return sig;
}

}  // namespace

void dedup_structures(DOSModel& dos) {
  // Identical field sets collapse to the first occurrence, repeatedly, since
  // merging children can make parents identical.
  for (;;) {
    std::map<std::string, int> by_signature;
    std::map<int, int> remap;
    std::vector<int> visiting;
    for (const auto& ds : dos.structures) {
      std::string sig = structure_signature(dos, ds.id, visiting);
      auto [it, inserted] = by_signature.emplace(sig, ds.id);
      if (!inserted && it->second != ds.id) remap[ds.id] = it->second;
    }
    if (remap.empty()) break;

    auto apply = [&](int id) {
      auto it = remap.find(id);
      return it == remap.end() ? id : it->second;
    };
    for (auto& c : dos.containers) {
      for (auto& s : c.structures) s = apply(s);
      std::vector<int> unique;
      for (int s : c.structures)
        if (std::find(unique.begin(), unique.end(), s) == unique.end())
          unique.push_back(s);
      c.structures = std::move(unique);
    }
    for (auto& op : dos.operations) op.result_structure = apply(op.result_structure);
    for (auto& ds : dos.structures)
      for (auto& f : ds.fields)
        if (f.type.base == DosBaseKind::Aggregate) f.type.structure = apply(f.type.structure);
  }

  // Drop the discarded structures and renumber the survivors densely.
  std::vector<bool> live(dos.structures.size(), false);
  for (const auto& c : dos.containers)
    for (int s : c.structures) live[static_cast<std::size_t>(s)] = true;
  for (const auto& op : dos.operations)
    if (op.result_structure >= 0) live[static_cast<std::size_t>(op.result_structure)] = true;
  std::function<void(int)> mark = [&](int id) {
    for (const auto& f : dos.structure(id).fields)
      if (f.type.base == DosBaseKind::Aggregate && f.type.structure >= 0 &&
          !live[static_cast<std::size_t>(f.type.structure)]) {
        live[static_cast<std::size_t>(f.type.structure)] = true;
        mark(f.type.structure);
      }
  };
  for (std::size_t i = 0; i < dos.structures.size(); ++i)
    if (live[i]) mark(static_cast<int>(i));

  std::map<int, int> renumber;
  std::vector<DataStructure> kept;
  for (auto& ds : dos.structures) {
    if (!live[static_cast<std::size_t>(ds.id)]) continue;
    int new_id = static_cast<int>(kept.size());
    renumber[ds.id] = new_id;
    ds.id = new_id;
    kept.push_back(std::move(ds));
  }
  dos.structures = std::move(kept);
  auto renum = [&](int id) { return id < 0 ? id : renumber.at(id); };
  for (auto& c : dos.containers)
    for (auto& s : c.structures) s = renum(s);
  for (auto& op : dos.operations) op.result_structure = renum(op.result_structure);
  for (auto& ds : dos.structures)
    for (auto& f : ds.fields)
      if (f.type.base == DosBaseKind::Aggregate) f.type.structure = renum(f.type.structure);
}

std::vector<int> find_db_call_nodes(const ControlFlowModel& cfg, const CodeModel& code,
                                    const ApiProfile& profile) {
  AnalysisIndex index(code);
  std::vector<int> out;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const CfgNode& node = cfg.nodes[i];
    if (node.kind != CfgNodeKind::Call) continue;
    const Expr* call = index.expr(node.expr);
    if (!call || !profile.match(call->name)) continue;

    // The call must reach the profile's container method through its
    // receiver chain; free functions with matching names are not operations.
    const Expr* cur = call->object.get();
    bool has_container = false;
    while (cur) {
      if (cur->kind == ExprKind::Call && cur->name == profile.container_method) {
        has_container = true;
        break;
      }
      if (cur->kind == ExprKind::Call || cur->kind == ExprKind::PropertyAccess ||
          cur->kind == ExprKind::IndexAccess) {
        cur = cur->object.get();
        continue;
      }
      break;
    }
    if (!has_container) continue;
    out.push_back(static_cast<int>(i));
  }

  // Container names must resolve; surface ProfileError early.
  ExtractOptions options;
  DOSModel scratch;
  Extraction ex(cfg, code, profile, options, scratch);
  for (int n : out)
    resolve_container_name(ex, *index.expr(cfg.nodes[static_cast<std::size_t>(n)].expr),
                           cfg.nodes[static_cast<std::size_t>(n)].stmt.file());
  return out;
}

void backward_traverse(const std::vector<int>& dbo_nodes, const ControlFlowModel& cfg,
                       const CodeModel& code, const ApiProfile& profile, DOSModel& dos) {
  ExtractOptions options;
  Extraction ex(cfg, code, profile, options, dos);
  backward_traverse_impl(ex, dbo_nodes);
}

void forward_traverse(const ControlFlowModel& cfg, const CodeModel& code,
                      const ApiProfile& profile, const ExtractOptions& options,
                      DOSModel& dos) {
  Extraction ex(cfg, code, profile, options, dos);
  forward_traverse_impl(ex);
}

void create_references(const ControlFlowModel& cfg, const CodeModel& code, DOSModel& dos) {
  ExtractOptions options;
  ApiProfile profile = default_mongodb_profile();
  Extraction ex(cfg, code, profile, options, dos);
  create_references_impl(ex);
}

DOSModel extract_dos(const ControlFlowModel& cfg, const CodeModel& code,
                     const ApiProfile& profile, const ExtractOptions& options) {
  DOSModel dos;
  Extraction ex(cfg, code, profile, options, dos);
  std::vector<int> dbo_nodes = find_db_call_nodes(cfg, code, profile);
  backward_traverse_impl(ex, dbo_nodes);
  forward_traverse_impl(ex);
  if (options.references) create_references_impl(ex);
  dedup_structures(dos);
  return dos;
}

}  // namespace sx
