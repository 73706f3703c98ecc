#include "schemaxray/uschema.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "schemaxray/diagnostics.hpp"

namespace sx {

std::string Cardinality::render() const {
  return std::to_string(lower) + ".." + (upper == CardinalityUpper::Many ? "*" : "1");
}

std::string AttributeType::render() const {
  std::string base = to_string(primitive);
  if (defaulted) base += " (defaulted)";
  if (collection) base += "[]";
  return base;
}

const EntityType* USchemaModel::find_entity(const std::string& name) const {
  for (const auto& e : entity_types)
    if (e.name == name) return &e;
  return nullptr;
}

EntityType* USchemaModel::find_entity(const std::string& name) {
  for (auto& e : entity_types)
    if (e.name == name) return &e;
  return nullptr;
}

std::string entity_name_for(const std::string& raw) {
  std::string name = raw;
  if (name.size() > 1 && name.back() == 's') name.pop_back();
  if (!name.empty() && name[0] >= 'a' && name[0] <= 'z')
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

namespace {

struct Mapper {
  const DOSModel& dos;
  USchemaModel schema;
  // Non-root entity types are keyed by name; each distinct structure adds a
  // variation.
  std::map<std::string, std::map<int, int>> nonroot_variations;  // name -> ds id -> variation

  explicit Mapper(const DOSModel& d) : dos(d) {}

  EntityType& ensure_entity(const std::string& name, bool root) {
    if (EntityType* e = schema.find_entity(name)) return *e;
    EntityType e;
    e.name = name;
    e.root = root;
    schema.entity_types.push_back(std::move(e));
    return schema.entity_types.back();
  }

  // Maps an embedded structure to a (non-root entity, variation) pair.
  std::pair<std::string, int> map_aggregate(const std::string& field_name, int ds_id) {
    std::string name = entity_name_for(field_name);
    auto& by_ds = nonroot_variations[name];
    auto it = by_ds.find(ds_id);
    if (it != by_ds.end()) return {name, it->second};

    EntityType& entity = ensure_entity(name, /*root=*/false);
    StructuralVariation variation;
    variation.id = static_cast<int>(entity.variations.size()) + 1;
    int variation_id = variation.id;
    by_ds[ds_id] = variation_id;
    entity.variations.push_back(std::move(variation));
    // Fill features after registering, so aggregate cycles cannot recurse
    // forever (acyclic by construction, but stay safe).
    std::vector<Feature> features = map_fields(ds_id);
    schema.find_entity(name)->variations[static_cast<std::size_t>(variation_id - 1)]
        .features = std::move(features);
    return {name, variation_id};
  }

  std::vector<Feature> map_fields(int ds_id) {
    std::vector<Feature> features;
    if (ds_id < 0) return features;
    for (const auto& field : dos.structure(ds_id).fields) {
      switch (field.type.base) {
        case DosBaseKind::Attribute: {
          Feature f;
          f.kind = FeatureKind::Attribute;
          f.name = field.name;
          f.type.primitive = field.type.primitive;
          f.type.defaulted = field.type.defaulted;
          f.type.collection = field.type.collection;
          features.push_back(std::move(f));
          break;
        }
        case DosBaseKind::Reference: {
          const DosContainer* target = dos.find_container(field.type.target_container);
          if (!target)
            throw MappingError("reference field '" + field.name +
                               "' targets unmapped container '" +
                               field.type.target_container + "'");
          Feature f;
          f.kind = FeatureKind::Reference;
          f.name = field.name;
          f.target = entity_name_for(target->name);
          f.cardinality.lower = 0;  // lower bounds are not inferable from code
          f.cardinality.upper =
              field.type.collection ? CardinalityUpper::Many : CardinalityUpper::One;
          features.push_back(std::move(f));
          break;
        }
        case DosBaseKind::Aggregate: {
          auto [name, variation] = map_aggregate(field.name, field.type.structure);
          Feature f;
          f.kind = FeatureKind::Aggregate;
          f.name = field.name;
          f.target = name;
          f.target_variation = variation;
          f.cardinality.lower = 0;
          f.cardinality.upper =
              field.type.collection ? CardinalityUpper::Many : CardinalityUpper::One;
          features.push_back(std::move(f));
          break;
        }
      }
      // The store's key field doubles as a Key feature.
      if (field.name == "_id" && field.type.base == DosBaseKind::Attribute) {
        Feature key;
        key.kind = FeatureKind::Key;
        key.name = "_id";
        features.push_back(std::move(key));
      }
    }
    return features;
  }
};

}  // namespace

USchemaModel to_uschema(const DOSModel& dos, const std::string& name) {
  Mapper mapper(dos);
  mapper.schema.name = name;
  for (const auto& container : dos.containers) {
    std::string entity_name = entity_name_for(container.name);
    mapper.ensure_entity(entity_name, true);
    for (int ds_id : container.structures) {
      // map_fields may append entity types; re-resolve after every step.
      StructuralVariation variation;
      variation.id = static_cast<int>(
          mapper.schema.find_entity(entity_name)->variations.size()) + 1;
      int idx = variation.id - 1;
      mapper.schema.find_entity(entity_name)->variations.push_back(std::move(variation));
      std::vector<Feature> features = mapper.map_fields(ds_id);
      mapper.schema.find_entity(entity_name)
          ->variations[static_cast<std::size_t>(idx)].features = std::move(features);
    }
  }
  return std::move(mapper.schema);
}

// --- diff ------------------------------------------------------------------

namespace {

std::string feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::Attribute: return "attribute";
    case FeatureKind::Aggregate: return "aggregate";
    case FeatureKind::Reference: return "reference";
    case FeatureKind::Key: return "key";
  }
  return "attribute";
}

const Feature* find_feature(const StructuralVariation& v, FeatureKind kind,
                            const std::string& name) {
  for (const auto& f : v.features)
    if (f.kind == kind && f.name == name) return &f;
  return nullptr;
}

}  // namespace

bool SchemaDiff::empty() const {
  return empty_up_to_defaults() && defaulted_types.empty() && lowered_cardinalities.empty();
}

bool SchemaDiff::empty_up_to_defaults() const {
  return missing_entities.empty() && extra_entities.empty() &&
         missing_features.empty() && extra_features.empty() &&
         type_mismatches.empty() && cardinality_mismatches.empty();
}

Json SchemaDiff::to_json() const {
  auto feature_list = [](const std::vector<FeatureDiff>& v) {
    Json out = Json::array();
    for (const auto& d : v)
      out.push_back({{"entity", d.entity}, {"feature", d.feature}, {"detail", d.detail}});
    return out;
  };
  Json j;
  j["missingEntities"] = missing_entities;
  j["extraEntities"] = extra_entities;
  j["missingFeatures"] = feature_list(missing_features);
  j["extraFeatures"] = feature_list(extra_features);
  j["typeMismatches"] = feature_list(type_mismatches);
  j["cardinalityMismatches"] = feature_list(cardinality_mismatches);
  j["defaultedTypes"] = feature_list(defaulted_types);
  j["loweredCardinalities"] = feature_list(lowered_cardinalities);
  return j;
}

SchemaDiff diff(const USchemaModel& expected, const USchemaModel& actual) {
  SchemaDiff out;
  for (const auto& e : expected.entity_types)
    if (!actual.find_entity(e.name)) out.missing_entities.push_back(e.name);
  for (const auto& e : actual.entity_types)
    if (!expected.find_entity(e.name)) out.extra_entities.push_back(e.name);

  for (const auto& exp_entity : expected.entity_types) {
    const EntityType* act_entity = actual.find_entity(exp_entity.name);
    if (!act_entity) continue;
    if (exp_entity.variations.empty() || act_entity->variations.empty()) continue;
    // Single-run pipelines produce one variation per entity; compare the first.
    const StructuralVariation& exp_var = exp_entity.variations.front();
    const StructuralVariation& act_var = act_entity->variations.front();

    for (const auto& f : exp_var.features) {
      const Feature* match = find_feature(act_var, f.kind, f.name);
      if (!match) {
        out.missing_features.push_back(
            {exp_entity.name, f.name, feature_kind_name(f.kind)});
        continue;
      }
      if (f.kind == FeatureKind::Attribute) {
        if (match->type.collection != f.type.collection ||
            match->type.primitive != f.type.primitive) {
          bool defaulted_case = match->type.defaulted &&
                                match->type.primitive == PrimitiveType::String &&
                                f.type.primitive != PrimitiveType::String &&
                                match->type.collection == f.type.collection;
          if (defaulted_case) {
            out.defaulted_types.push_back({exp_entity.name, f.name,
                                           "expected " + f.type.render()});
          } else {
            out.type_mismatches.push_back(
                {exp_entity.name, f.name,
                 "expected " + f.type.render() + ", actual " + match->type.render()});
          }
        }
      }
      if (f.kind == FeatureKind::Reference || f.kind == FeatureKind::Aggregate) {
        if (match->target != f.target) {
          out.type_mismatches.push_back(
              {exp_entity.name, f.name,
               "expected target " + f.target + ", actual " + match->target});
        }
        if (match->cardinality != f.cardinality) {
          bool lowered = match->cardinality.lower == 0 && f.cardinality.lower == 1 &&
                         match->cardinality.upper == f.cardinality.upper;
          if (lowered) {
            out.lowered_cardinalities.push_back(
                {exp_entity.name, f.name, "expected " + f.cardinality.render()});
          } else {
            out.cardinality_mismatches.push_back(
                {exp_entity.name, f.name,
                 "expected " + f.cardinality.render() + ", actual " +
                     match->cardinality.render()});
          }
        }
      }
    }
    for (const auto& f : act_var.features) {
      if (!find_feature(exp_var, f.kind, f.name))
        out.extra_features.push_back({exp_entity.name, f.name, feature_kind_name(f.kind)});
    }
  }
  return out;
}

}  // namespace sx
