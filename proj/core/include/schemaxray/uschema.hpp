#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schemaxray/code_json.hpp"
#include "schemaxray/dos.hpp"

namespace sx {

// U-Schema logical model: entity types with structural variations composed
// of attribute/aggregate/reference/key features.

enum class FeatureKind { Attribute, Aggregate, Reference, Key };

enum class CardinalityUpper { One, Many };

struct Cardinality {
  int lower = 0;  // 0 or 1
  CardinalityUpper upper = CardinalityUpper::One;

  std::string render() const;
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct AttributeType {
  PrimitiveType primitive = PrimitiveType::String;
  bool defaulted = false;
  bool collection = false;  // array of the primitive

  std::string render() const;
  friend bool operator==(const AttributeType&, const AttributeType&) = default;
};

struct Feature {
  FeatureKind kind = FeatureKind::Attribute;
  std::string name;          // attribute/aggregate/reference name; Key: attribute name
  AttributeType type;        // Attribute
  std::string target;        // Aggregate/Reference target entity type
  int target_variation = 1;  // Aggregate
  Cardinality cardinality;   // Aggregate/Reference
};

struct StructuralVariation {
  int id = 1;  // 1-based per entity type
  std::vector<Feature> features;
};

struct EntityType {
  std::string name;
  bool root = true;
  std::vector<StructuralVariation> variations;
};

struct USchemaModel {
  std::string name;
  std::vector<EntityType> entity_types;
  // Relationship types are representable in U-Schema but this pipeline never
  // produces them; the list stays empty.
  std::vector<std::string> relationship_types;

  const EntityType* find_entity(const std::string& name) const;
  EntityType* find_entity(const std::string& name);
};

// Entity naming: containers and aggregate fields map to capitalized singular
// names ('users' -> 'User', 'watchedMovies' -> 'WatchedMovie').
std::string entity_name_for(const std::string& raw);

// DOS -> U-Schema transformation (Table 2 mapping). Throws MappingError when
// a Reference field targets an unmapped container.
USchemaModel to_uschema(const DOSModel& dos, const std::string& name);

// --- serialization ------------------------------------------------------

std::string serialize(const USchemaModel& schema);
Json uschema_to_json(const USchemaModel& schema);
USchemaModel deserialize(const std::string& text);
USchemaModel uschema_from_json(const Json& j);

// --- diffing --------------------------------------------------------------

struct FeatureDiff {
  std::string entity;
  std::string feature;
  std::string detail;
};

struct SchemaDiff {
  std::vector<std::string> missing_entities;  // in expected, not in actual
  std::vector<std::string> extra_entities;
  std::vector<FeatureDiff> missing_features;
  std::vector<FeatureDiff> extra_features;
  std::vector<FeatureDiff> type_mismatches;
  std::vector<FeatureDiff> cardinality_mismatches;
  // Expected a concrete primitive, actual carries the defaulted string type.
  std::vector<FeatureDiff> defaulted_types;
  // Lower bound 1 in expected vs inferred 0 (code analysis cannot see it).
  std::vector<FeatureDiff> lowered_cardinalities;

  bool empty() const;
  bool empty_up_to_defaults() const;
  Json to_json() const;
};

SchemaDiff diff(const USchemaModel& expected, const USchemaModel& actual);

// --- rendering -----------------------------------------------------------

enum class RenderFormat { Text, Dot };

std::string render(const USchemaModel& schema, RenderFormat format);

}  // namespace sx
