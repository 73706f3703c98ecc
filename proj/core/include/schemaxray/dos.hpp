#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schemaxray/api_profile.hpp"
#include "schemaxray/cfg.hpp"
#include "schemaxray/code_model.hpp"
#include "schemaxray/diagnostics.hpp"

namespace sx {

// --- physical structure ----------------------------------------------

enum class DosBaseKind { Attribute, Aggregate, Reference };

// Field type: optionally a collection of the base kind. Collections nest at
// most one level (arrays of scalars, embedded objects or references).
struct DosFieldType {
  bool collection = false;
  DosBaseKind base = DosBaseKind::Attribute;

  // Attribute
  PrimitiveType primitive = PrimitiveType::String;
  bool defaulted = true;  // default-String rule applied (no literal evidence)

  // Aggregate: index into DOSModel::structures
  int structure = -1;

  // Reference
  std::string target_container;
  std::string target_attribute;
};

struct DuplicatedFrom {
  std::string container;
  std::string field;
};

struct DosField {
  std::string name;
  DosFieldType type;
  std::optional<DuplicatedFrom> duplicated_from;
};

struct DataStructure {
  int id = -1;
  std::vector<DosField> fields;
};

struct DosContainer {
  std::string name;
  std::vector<int> structures;  // DataStructure ids
};

// --- operations -------------------------------------------------------

struct PathSegment {
  bool is_index = false;
  std::string name;        // property name (when !is_index)
  std::string index_text;  // rendered index expression (when is_index)
};

struct VariablePath {
  std::string root;
  std::vector<PathSegment> segments;
  NodeId expr;  // the access expression in the code model

  std::string render() const;
};

struct PredicateRhs {
  bool is_literal = false;
  LiteralKind literal_kind = LiteralKind::Null;
  std::string lexeme;
  VariablePath path;  // when !is_literal
};

struct PredicateConjunct {
  std::string field_path;  // dotted field name on the operation's container
  PredicateRhs rhs;
};

struct Predicate {
  std::vector<PredicateConjunct> conjuncts;
};

// One $lookup stage of an aggregation pipeline.
struct LookupJoin {
  std::string from;
  std::string local_field;
  std::string foreign_field;
  std::string as;
  NodeId stage;  // the stage object literal
};

struct DatabaseOperation {
  OpKind kind = OpKind::Read;
  NodeId stmt;       // enclosing statement
  NodeId call_expr;  // the profile-matched Call
  int cfg_node = -1;
  std::string container;
  std::optional<std::string> result_variable;
  bool result_is_collection = false;
  std::optional<Predicate> filter;
  int prev = -1;  // previousDBO (operation index)
  int next = -1;  // nextDBO
  bool is_join = false;
  int result_structure = -1;  // DataStructure id (Reads)
  std::vector<std::string> params;  // rendered argument summaries
  std::vector<LookupJoin> lookups;  // aggregate-read joins
  std::vector<std::string> unwinds;  // $unwind'ed as-names

  bool is_read() const { return kind == OpKind::Read || kind == OpKind::AggregateRead; }
};

// A resolved reference produced by createReferences: the field holding the
// identifier and the container it points to.
struct ReferenceLink {
  int join_op = -1;
  int lookup = -1;  // index into the op's lookups, -1 for sequential joins
  std::string ref_container;               // container owning the reference field
  std::vector<std::string> ref_field_path; // path from container root to the field
  std::string target_container;
  std::string target_attribute;
};

struct DOSModel {
  std::vector<DatabaseOperation> operations;
  std::vector<DosContainer> containers;
  std::vector<DataStructure> structures;
  std::vector<ReferenceLink> references;
  DiagnosticList diagnostics;

  DosContainer* find_container(const std::string& name);
  const DosContainer* find_container(const std::string& name) const;
  DataStructure& structure(int id);
  const DataStructure& structure(int id) const;
  DosField* find_field(int structure_id, const std::string& name);

  int join_count() const;
};

struct ExtractOptions {
  bool payload_structures = true;  // Insert/Update payload mining
  bool references = true;          // createReferences stage (ablation switch)
};

// --- Algorithm 1 -------------------------------------------------------

// Call nodes matching the profile, in subgraph-linked execution order.
// Throws ProfileError when a matched call's container argument is neither a
// string literal nor a resolvable constant.
std::vector<int> find_db_call_nodes(const ControlFlowModel& cfg, const CodeModel& code,
                                    const ApiProfile& profile);

// Orchestrator: operation discovery, backward dependency/join detection,
// forward structure discovery and reference creation.
DOSModel extract_dos(const ControlFlowModel& cfg, const CodeModel& code,
                     const ApiProfile& profile, const ExtractOptions& options = {});

// Individual stages, exposed for testing. `dbo_nodes` must come from
// find_db_call_nodes over the same cfg/code pair.
void backward_traverse(const std::vector<int>& dbo_nodes, const ControlFlowModel& cfg,
                       const CodeModel& code, const ApiProfile& profile, DOSModel& dos);
void forward_traverse(const ControlFlowModel& cfg, const CodeModel& code,
                      const ApiProfile& profile, const ExtractOptions& options,
                      DOSModel& dos);
void create_references(const ControlFlowModel& cfg, const CodeModel& code, DOSModel& dos);
void dedup_structures(DOSModel& dos);

Json dos_to_json(const DOSModel& dos);

}  // namespace sx
