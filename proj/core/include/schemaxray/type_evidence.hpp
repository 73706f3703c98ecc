#pragma once

#include <map>
#include <string>

#include "schemaxray/code_model.hpp"
#include "schemaxray/diagnostics.hpp"

namespace sx {

// Local type evidence gathered from literal initializations, literal
// comparisons and object-literal filter pairs. Evidence is keyed by the leaf
// name of the variable or property involved (`stars` in
// `user.watchedMovies[0].stars >= 5`).
class TypeEvidence {
 public:
  void add(const std::string& name, PrimitiveType type);

  // Merged evidence for a name: a single primitive, Unknown when absent or
  // irreconcilable. int + double widens to double.
  PrimitiveType lookup(const std::string& name) const;

  bool conflicted(const std::string& name) const;

  const std::map<std::string, std::vector<PrimitiveType>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<PrimitiveType>> entries_;
};

// Scans every statement of the model for literal evidence.
TypeEvidence gather_type_evidence(const CodeModel& model);

// Annotates VariableDecl statements and the model's globals with inferred
// primitive types; conflicting evidence stays Unknown and records a warning.
void infer_local_types(CodeModel& model, DiagnosticList& diags);

PrimitiveType literal_primitive(LiteralKind kind);

}  // namespace sx
