#include <algorithm>
#include <map>
#include <set>

#include "path_analysis.hpp"
#include "schemaxray/printer.hpp"
#include "schemaxray/refactor.hpp"

namespace sx {

namespace {

std::string capitalize(const std::string& s) {
  std::string out = s;
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string lower_first(const std::string& s) {
  std::string out = s;
  if (!out.empty() && out[0] >= 'A' && out[0] <= 'Z')
    out[0] = static_cast<char>(out[0] - 'A' + 'a');
  return out;
}

std::string stem_for(const std::string& ref_leaf, const std::string& referenced_entity) {
  if (ref_leaf.size() > 3 && ref_leaf.ends_with("_id"))
    return ref_leaf.substr(0, ref_leaf.size() - 3);
  return lower_first(referenced_entity);
}

const ReferenceLink* link_for(const DOSModel& dos, int join_op, int lookup) {
  for (const auto& r : dos.references)
    if (r.join_op == join_op && r.lookup == lookup) return &r;
  return nullptr;
}

// Walks the reference-field path from the container root and reports the
// receiving structure, the aggregate chain leading to it, and which chain
// links are collections.
struct Destination {
  int structure = -1;
  std::vector<std::string> path;
  std::vector<bool> path_collection;
  std::string entity;
};

Destination destination_for(const DOSModel& dos, const std::string& container,
                            const std::vector<std::string>& ref_field_path) {
  Destination dest;
  const DosContainer* c = dos.find_container(container);
  if (!c || c->structures.empty()) return dest;
  dest.structure = c->structures.front();
  dest.entity = entity_name_for(container);
  if (ref_field_path.size() <= 1) return dest;
  int current = dest.structure;
  for (std::size_t i = 0; i + 1 < ref_field_path.size(); ++i) {
    const DosField* field = nullptr;
    for (const auto& f : dos.structure(current).fields)
      if (f.name == ref_field_path[i]) field = &f;
    if (!field || field->type.base != DosBaseKind::Aggregate) break;
    dest.path.push_back(field->name);
    dest.path_collection.push_back(field->type.collection);
    dest.entity = entity_name_for(field->name);
    current = field->type.structure;
  }
  dest.structure = current;
  return dest;
}

AttributeType field_attribute_type(const DOSModel& dos, const std::string& container,
                                   const std::string& field_name) {
  AttributeType type;
  type.defaulted = true;
  const DosContainer* c = dos.find_container(container);
  if (!c || c->structures.empty()) return type;
  for (const auto& f : dos.structure(c->structures.front()).fields) {
    if (f.name == field_name && f.type.base == DosBaseKind::Attribute) {
      type.primitive = f.type.primitive;
      type.defaulted = f.type.defaulted;
      type.collection = f.type.collection;
    }
  }
  return type;
}

// Collection flag of the field at the end of a path from the container root.
bool leaf_is_collection(const DOSModel& dos, const std::string& container,
                        const std::vector<std::string>& path) {
  const DosContainer* c = dos.find_container(container);
  if (!c || c->structures.empty() || path.empty()) return false;
  int current = c->structures.front();
  const DosField* field = nullptr;
  for (const auto& name : path) {
    field = nullptr;
    for (const auto& f : dos.structure(current).fields)
      if (f.name == name) field = &f;
    if (!field) return false;
    if (field->type.base == DosBaseKind::Aggregate) current = field->type.structure;
  }
  return field->type.collection;
}

// Copies a discovered field into the destination structure, keeping the
// original name and recording its origin.
void copy_field_into(DOSModel& dos, int dest_structure, const std::string& name,
                     const std::string& from_container) {
  if (dest_structure < 0) return;
  for (const auto& f : dos.structure(dest_structure).fields)
    if (f.name == name) return;  // names are unique per structure
  DosField copy;
  copy.name = name;
  const DosContainer* src = dos.find_container(from_container);
  if (src && !src->structures.empty()) {
    for (const auto& f : dos.structure(src->structures.front()).fields)
      if (f.name == name) copy.type = f.type;
  }
  copy.duplicated_from = DuplicatedFrom{from_container, name};
  dos.structure(dest_structure).fields.push_back(std::move(copy));
}

struct ScanState {
  std::set<std::string> join_aliases;
  std::set<std::string> prev_aliases;  // empty for aggregation joins
  std::vector<NodeId> usage_sites;
  bool partial = false;
};

void extend_aliases(const Statement& stmt, std::set<std::string>& aliases) {
  const Expr* value = nullptr;
  std::string target;
  if (stmt.kind == StmtKind::VariableDecl && stmt.expr) {
    target = stmt.name;
    value = stmt.expr.get();
  } else if (stmt.kind == StmtKind::Assignment &&
             stmt.target->kind == ExprKind::VarAccess) {
    target = stmt.target->name;
    value = stmt.value.get();
  }
  if (!value) return;
  auto roots = detail::root_vars(*value);
  for (const auto& r : roots) {
    if (aliases.count(r)) {
      aliases.insert(target);
      return;
    }
  }
}

// First property name of a path, skipping a leading document-selection index
// for array results. Returns the segment position of that property.
std::optional<std::size_t> first_property(const VariablePath& path, bool result_is_collection) {
  std::size_t pos = 0;
  if (result_is_collection) {
    if (path.segments.empty() || !path.segments[0].is_index) return std::nullopt;
    pos = 1;
  }
  if (pos >= path.segments.size() || path.segments[pos].is_index) return std::nullopt;
  return pos;
}

}  // namespace

std::vector<JoinRemovalPlan> detect_duplications(const ControlFlowModel& cfg,
                                                 const CodeModel& code, DOSModel& dos) {
  detail::AnalysisIndex index(code);
  std::vector<JoinRemovalPlan> plans;

  for (std::size_t op_index = 0; op_index < dos.operations.size(); ++op_index) {
    const DatabaseOperation& op = dos.operations[op_index];
    if (!op.is_join || !op.is_read() || !op.result_variable) continue;

    JoinRemovalPlan plan;
    plan.join_op = static_cast<int>(op_index);
    plan.join_stmt = op.stmt;
    plan.join_type = op.kind == OpKind::AggregateRead ? "aggregation" : "sequential";

    ScanState state;
    state.join_aliases.insert(*op.result_variable);

    if (op.kind == OpKind::AggregateRead) {
      plan.source_container = op.container;
      plan.source_entity = entity_name_for(op.container);
    } else {
      if (op.prev < 0) continue;
      const DatabaseOperation& prev = dos.operations[static_cast<std::size_t>(op.prev)];
      if (!prev.result_variable) continue;
      plan.prev_op = op.prev;
      plan.prev_stmt = prev.stmt;
      plan.source_container = prev.container;
      plan.source_entity = entity_name_for(prev.container);
      state.prev_aliases.insert(*prev.result_variable);
    }

    // Duplication candidates per referenced entity, in discovery order.
    // Sequential joins contribute one group; each $lookup contributes one.
    std::map<int, std::vector<std::string>> fields_by_lookup;
    std::vector<int> lookup_order;
    auto add_field = [&](int lookup, const std::string& name) {
      auto& list = fields_by_lookup[lookup];
      if (std::find(list.begin(), list.end(), name) == list.end()) {
        list.push_back(name);
        if (std::find(lookup_order.begin(), lookup_order.end(), lookup) ==
            lookup_order.end())
          lookup_order.push_back(lookup);
      }
    };

    std::set<std::uint64_t> seen_stmts;
    for (int node_index : forward_reachable(cfg, op.cfg_node)) {
      const CfgNode& node = cfg.nodes[static_cast<std::size_t>(node_index)];
      if (!node.stmt.valid() || seen_stmts.count(node.stmt.value)) continue;
      seen_stmts.insert(node.stmt.value);
      const Statement* stmt = index.stmt(node.stmt);
      if (!stmt) continue;

      auto roots = detail::root_vars_of_stmt(*stmt);
      bool uses_join = false;
      for (const auto& alias : state.join_aliases)
        if (roots.count(alias)) uses_join = true;
      if (uses_join) {
        state.usage_sites.push_back(stmt->id);
        if (plan.join_type == "sequential") {
          for (const auto& alias : state.join_aliases)
            if (detail::escapes_as_argument(*stmt, alias)) state.partial = true;
        }
      }

      if (op.kind == OpKind::AggregateRead) {
        // $lookup output: fields accessed through an 'as' path.
        for (const auto& alias : state.join_aliases) {
          for (const auto& path : detail::paths_rooted_at(*stmt, alias)) {
            auto pos = first_property(path, op.result_is_collection);
            if (!pos) continue;
            const std::string& head = path.segments[*pos].name;
            for (std::size_t li = 0; li < op.lookups.size(); ++li) {
              if (op.lookups[li].as != head) continue;
              std::size_t fpos = *pos + 1;
              if (fpos < path.segments.size() && path.segments[fpos].is_index) ++fpos;
              if (fpos < path.segments.size() && !path.segments[fpos].is_index)
                add_field(static_cast<int>(li), path.segments[fpos].name);
            }
          }
        }
      } else {
        bool uses_prev = false;
        for (const auto& alias : state.prev_aliases)
          if (roots.count(alias)) uses_prev = true;
        // Both result variables co-occur: accessed join fields are candidates.
        if (uses_join && uses_prev) {
          for (const auto& alias : state.join_aliases) {
            for (const auto& path : detail::paths_rooted_at(*stmt, alias)) {
              auto pos = first_property(path, op.result_is_collection);
              if (pos) add_field(-1, path.segments[*pos].name);
            }
          }
        }
      }

      extend_aliases(*stmt, state.join_aliases);
      if (plan.join_type == "sequential") extend_aliases(*stmt, state.prev_aliases);
    }

    if (lookup_order.empty()) continue;  // no co-use sites: plan suppressed

    plan.usage_sites = state.usage_sites;
    plan.usage_line_count = static_cast<int>(state.usage_sites.size());
    plan.partial = state.partial;

    for (int lookup : lookup_order) {
      DuplicationEntry entry;
      entry.lookup = lookup;
      const ReferenceLink* link = link_for(dos, plan.join_op, lookup);

      if (lookup >= 0) {
        const LookupJoin& lj = op.lookups[static_cast<std::size_t>(lookup)];
        entry.referenced_container = lj.from;
        entry.as_name = lj.as;
      } else {
        entry.referenced_container = op.container;
      }
      entry.referenced_entity = entity_name_for(entry.referenced_container);

      Destination dest;
      if (link) {
        entry.ref_leaf = link->ref_field_path.empty() ? "" : link->ref_field_path.back();
        entry.target_attribute = link->target_attribute;
        entry.reverse = link->ref_container == entry.referenced_container;
        entry.ref_leaf_collection =
            leaf_is_collection(dos, link->ref_container, link->ref_field_path);
        if (lookup >= 0) {
          // Aggregation results materialize in the aggregating container.
          dest = destination_for(dos, op.container, {});
        } else {
          dest = destination_for(dos, link->ref_container, link->ref_field_path);
        }
      } else {
        dest = destination_for(dos, plan.source_container, {});
      }
      if (entry.ref_leaf.empty()) entry.ref_leaf = lower_first(entry.referenced_entity);
      if (entry.target_attribute.empty()) entry.target_attribute = "_id";
      entry.stem = stem_for(entry.ref_leaf, entry.referenced_entity);
      entry.destination_entity = dest.entity;
      entry.destination_path = dest.path;
      entry.destination_path_collection = dest.path_collection;

      entry.fields = fields_by_lookup[lookup];
      for (const auto& f : entry.fields)
        entry.field_types.push_back(field_attribute_type(dos, entry.referenced_container, f));
      if (entry.fields.size() == 1) {
        entry.new_names.push_back(entry.stem + "_" + entry.fields.front());
      } else {
        entry.new_names = entry.fields;  // nested under an object named by the stem
      }

      if (lookup < 0 && op.filter) {
        // The filter's variable side becomes the rewrite base.
        for (const auto& conjunct : op.filter->conjuncts) {
          if (!conjunct.rhs.is_literal &&
              state.prev_aliases.count(conjunct.rhs.path.root)) {
            entry.rewrite_base_expr = conjunct.rhs.path.expr;
            break;
          }
        }
      }

      for (const auto& f : entry.fields)
        copy_field_into(dos, dest.structure, f, entry.referenced_container);

      plan.entries.push_back(std::move(entry));
    }

    plans.push_back(std::move(plan));
  }
  return plans;
}

namespace {

const CodeBlock* enclosing_block(const CodeModel& code, NodeId stmt_id) {
  const CodeBlock* found = nullptr;
  std::function<void(const CodeBlock&)> visit_block = [&](const CodeBlock& b) {
    for (const auto& s : b.statements) {
      if (s->id == stmt_id) {
        found = &b;
        return;
      }
      if (found) return;
      for_each_stmt_expr(*s, [&](const Expr& e) {
        if (!found && e.kind == ExprKind::Lambda && e.body) visit_block(*e.body);
      });
      if (!found && s->then_block) visit_block(*s->then_block);
      if (!found && s->else_block) visit_block(*s->else_block);
    }
  };
  std::function<void(const Container&)> visit = [&](const Container& c) {
    for (const auto& cc : c.code_containers)
      for (const auto& b : cc.blocks)
        if (!found) visit_block(*b);
    for (const auto& child : c.children)
      if (!found) visit(child);
  };
  for (const auto& c : code.containers)
    if (!found) visit(c);
  return found;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string plan_description(const JoinRemovalPlan& plan, const DOSModel& dos) {
  const DatabaseOperation& op = dos.operations[static_cast<std::size_t>(plan.join_op)];
  if (plan.join_type == "aggregation") {
    std::string from;
    for (std::size_t i = 0; i < op.lookups.size(); ++i) {
      if (i) from += ", ";
      from += op.lookups[i].from;
    }
    return "aggregate on " + op.container + " with $lookup from " + from;
  }
  const DatabaseOperation& prev = dos.operations[static_cast<std::size_t>(plan.prev_op)];
  return "read on " + op.container + " using the result of the read on " + prev.container;
}

}  // namespace

std::vector<JoinRemovalPlan> build_plans(const ControlFlowModel& cfg,
                                         const CodeModel& code, DOSModel& dos) {
  std::vector<JoinRemovalPlan> plans = detect_duplications(cfg, code, dos);
  for (auto& plan : plans) {
    plan.description = plan_description(plan, dos);

    const DatabaseOperation& op = dos.operations[static_cast<std::size_t>(plan.join_op)];
    std::set<std::string> involved{op.container, plan.source_container};
    for (const auto& e : plan.entries) involved.insert(e.referenced_container);
    for (std::size_t i = 0; i < dos.operations.size(); ++i) {
      if (static_cast<int>(i) == plan.join_op || static_cast<int>(i) == plan.prev_op)
        continue;
      if (involved.count(dos.operations[i].container))
        plan.related_ops.push_back(static_cast<int>(i));
    }

    if (const CodeBlock* block = enclosing_block(code, plan.join_stmt))
      plan.original_snippet = regenerate(*block);

    std::string key = plan.join_type + "|" + plan.source_container + "|" +
                      plan.source_entity;
    for (const auto& e : plan.entries) {
      key += "|" + e.referenced_container + ":";
      for (const auto& f : e.fields) key += f + ",";
      key += ">";
      for (const auto& n : e.new_names) key += n + ",";
      key += "@" + e.destination_entity;
      for (const auto& p : e.destination_path) key += "." + p;
    }
    key += "|" + plan.original_snippet;
    plan.id = hex64(fnv1a(key));
  }
  return plans;
}

Json plans_to_json(const std::vector<JoinRemovalPlan>& plans) {
  Json j;
  j["formatVersion"] = 1;
  Json out = Json::array();
  for (const auto& plan : plans) {
    Json jp;
    jp["id"] = plan.id;
    jp["query"] = plan.description;
    jp["joinType"] = plan.join_type;
    Json entries = Json::array();
    for (const auto& e : plan.entries) {
      Json je;
      je["targetEntity"] = plan.source_entity;  // duplication host (Table 3 naming)
      je["sourceEntity"] = e.referenced_entity;
      je["fieldsToDuplicate"] = e.fields;
      je["newNames"] = e.new_names;
      je["duplicationLocation"] = "In " + e.destination_entity;
      entries.push_back(std::move(je));
    }
    jp["duplications"] = std::move(entries);
    jp["usageLineCount"] = plan.usage_line_count;
    jp["relatedOperationCount"] = static_cast<int>(plan.related_ops.size());
    jp["originalSnippet"] = plan.original_snippet;
    jp["rewrittenSnippet"] = plan.rewritten_snippet;
    jp["partial"] = plan.partial;
    out.push_back(std::move(jp));
  }
  j["plans"] = std::move(out);
  return j;
}

std::string render_plan_table(const std::vector<JoinRemovalPlan>& plans) {
  struct Row {
    std::string number, target, source, fields, location, type;
  };
  std::vector<Row> rows;
  int number = 0;
  for (const auto& plan : plans) {
    ++number;
    for (const auto& e : plan.entries) {
      Row row;
      row.number = std::to_string(number);
      row.target = plan.source_entity;
      row.source = e.referenced_entity;
      for (std::size_t i = 0; i < e.fields.size(); ++i) {
        if (i) row.fields += ", ";
        row.fields += e.fields[i];
      }
      row.location = "In " + e.destination_entity;
      row.type = plan.join_type == "aggregation" ? "Aggregation" : "Sequential Query";
      rows.push_back(std::move(row));
    }
  }

  const char* headers[6] = {"#", "Target Entity", "Source Entity",
                            "Fields to Duplicate", "Duplication Location", "Join Type"};
  std::size_t widths[6];
  for (int i = 0; i < 6; ++i) widths[i] = std::string(headers[i]).size();
  for (const auto& r : rows) {
    const std::string* cells[6] = {&r.number, &r.target, &r.source,
                                   &r.fields, &r.location, &r.type};
    for (int i = 0; i < 6; ++i) widths[i] = std::max(widths[i], cells[i]->size());
  }

  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  std::string out;
  for (int i = 0; i < 6; ++i)
    out += (i ? "  " : "") + pad(headers[i], widths[i]);
  out += "\n";
  for (const auto& r : rows) {
    const std::string* cells[6] = {&r.number, &r.target, &r.source,
                                   &r.fields, &r.location, &r.type};
    for (int i = 0; i < 6; ++i)
      out += (i ? "  " : "") + pad(*cells[i], widths[i]);
    out += "\n";
  }
  return out;
}

}  // namespace sx
