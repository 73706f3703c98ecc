#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schemaxray/dos.hpp"
#include "schemaxray/uschema.hpp"

namespace sx {

// One referenced entity's contribution to a join removal plan (Table-3 row).
// Carries everything emission and application need, so emit_copy and
// emit_migration stay pure functions of the plan.
struct DuplicationEntry {
  std::string referenced_container;  // fields are copied FROM this container
  std::string referenced_entity;
  std::vector<std::string> fields;      // source field names, discovery order
  std::vector<AttributeType> field_types;
  std::string stem;  // naming stem: reference field minus '_id', else entity name
  std::vector<std::string> new_names;  // single field: {stem_field}; else originals

  // Join condition shape, for COPY / migration emission.
  std::string ref_leaf;          // the reference field (movie_id, albums, ...)
  bool ref_leaf_collection = false;
  std::string target_attribute;  // key on the referenced side (usually _id)
  bool reverse = false;          // the referenced side holds the identifiers

  // Destination: structure that receives the duplicated fields.
  std::string destination_entity;
  std::vector<std::string> destination_path;  // aggregate chain from container root
  std::vector<bool> destination_path_collection;

  // Aggregation joins only.
  int lookup = -1;
  std::string as_name;

  // Sequential joins only: the filter's variable-side access expression;
  // its prefix becomes the rewritten access base.
  NodeId rewrite_base_expr;
};

struct JoinRemovalPlan {
  std::string id;  // content hash; stable across runs on identical sources
  std::string description;
  std::string join_type;  // "sequential" | "aggregation"
  int join_op = -1;
  int prev_op = -1;  // -1 for aggregation joins
  NodeId join_stmt;
  NodeId prev_stmt;
  std::string source_container;  // referencing side (duplication host)
  std::string source_entity;
  std::vector<DuplicationEntry> entries;
  std::vector<NodeId> usage_sites;
  int usage_line_count = 0;
  std::vector<int> related_ops;  // other operations touching either container
  std::string original_snippet;
  std::string rewritten_snippet;
  bool partial = false;  // join result escapes the block; refuses application
};

struct FileChange {
  std::string path;
  std::string change;
};

struct RefactorOutcome {
  USchemaModel updated_schema;
  CodeModel updated_code;
  std::string copy_statement;
  std::string migration_script;
  std::vector<FileChange> report;
};

// --- Algorithm 2 -----------------------------------------------------------

// Field duplication detection: for every join, fields of the join result
// that are co-used with the previous result are copied into the previous
// operation's structure (duplicatedFrom set). Aggregation joins contribute
// the $lookup output fields that are accessed. Returns the plans implied by
// the detection; `dos` is annotated in place.
std::vector<JoinRemovalPlan> detect_duplications(const ControlFlowModel& cfg,
                                                 const CodeModel& code, DOSModel& dos);

// Full plan construction: detection plus snippets, ids and related-operation
// inventory. Plans with zero duplicates are suppressed.
std::vector<JoinRemovalPlan> build_plans(const ControlFlowModel& cfg,
                                         const CodeModel& code, DOSModel& dos);

// Applies one plan: updates the schema, rewrites the code model, and emits
// the COPY statement and migration script. The input models are not touched.
// Throws PlanStaleError when the plan no longer matches the code, and
// RewriteError when a usage of the join result cannot be rewritten (nothing
// is returned partially).
RefactorOutcome apply_plan(const JoinRemovalPlan& plan, const CodeModel& code,
                           const USchemaModel& schema, const ApiProfile& profile);

// Orion-style schema evolution operation, one line per duplication entry:
//   COPY <Target>::{fields} TO <Source>::<path> WHERE <field> = <attribute>
std::string emit_copy(const JoinRemovalPlan& plan);

// Shell-executable data update script for the document store.
std::string emit_migration(const JoinRemovalPlan& plan);

Json plans_to_json(const std::vector<JoinRemovalPlan>& plans);

// Table-3-style fixed-width table, one row per duplication entry.
std::string render_plan_table(const std::vector<JoinRemovalPlan>& plans);

}  // namespace sx
