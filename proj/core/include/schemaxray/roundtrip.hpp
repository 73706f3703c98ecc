#pragma once

#include <string>
#include <vector>

#include "schemaxray/parser.hpp"
#include "schemaxray/uschema.hpp"

namespace sx {

// Declarative schema used to drive deterministic application generation.

struct SpecAttribute {
  std::string name;
  PrimitiveType type = PrimitiveType::String;
};

struct SpecRelation {
  std::string name;
  std::string target;
  int lower = 0;
  CardinalityUpper upper = CardinalityUpper::One;
};

struct SpecEntity {
  std::string name;
  bool root = true;
  std::vector<SpecAttribute> attributes;
  std::vector<SpecRelation> aggregates;
  std::vector<SpecRelation> references;
};

struct SchemaSpec {
  std::string name;
  std::vector<SpecEntity> entities;

  const SpecEntity* find(const std::string& name) const;
};

SchemaSpec schema_spec_from_json(const Json& j);
SchemaSpec load_schema_spec(const std::string& path);

// The U-Schema model the spec designs (for comparison with extraction).
USchemaModel designed_schema(const SchemaSpec& spec);

// Deterministically generates a backend exercising the spec: CRUD handlers
// per root entity plus the join inventory (sequential-callback joins and
// aggregation $lookup joins). Byte-identical for identical (spec, seed).
// Throws SpecError on dangling reference/aggregate targets.
std::vector<SourceFile> generate_app(const SchemaSpec& spec, std::uint64_t seed);

struct CategoryScore {
  int expected = 0;
  int actual = 0;
  int matched = 0;

  double precision() const { return actual == 0 ? 1.0 : double(matched) / actual; }
  double recall() const { return expected == 0 ? 1.0 : double(matched) / expected; }
};

struct RoundTripReport {
  CategoryScore entities;
  CategoryScore attributes;
  CategoryScore references;
  CategoryScore aggregates;
  int defaulted_type_count = 0;
  int lowered_cardinality_count = 0;
  int op_count = 0;
  int join_count = 0;

  Json to_json() const;
  std::string render() const;
};

// Name+kind matching per category; defaulted types and lowered lower-bounds
// are counted separately, not as mismatches.
RoundTripReport compare(const USchemaModel& designed, const USchemaModel& extracted);

}  // namespace sx
