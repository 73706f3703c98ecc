#include "schemaxray/diagnostics.hpp"
#include "schemaxray/uschema.hpp"

namespace sx {

namespace {

std::string upper_to_string(CardinalityUpper u) {
  return u == CardinalityUpper::Many ? "many" : "1";
}

PrimitiveType primitive_from_string(const std::string& s, const std::string& path) {
  if (s == "string") return PrimitiveType::String;
  if (s == "int") return PrimitiveType::Int;
  if (s == "double") return PrimitiveType::Double;
  if (s == "bool") return PrimitiveType::Bool;
  if (s == "unknown") return PrimitiveType::Unknown;
  throw FormatError("unknown primitive type '" + s + "'", path);
}

Json feature_to_json(const Feature& f) {
  Json j;
  switch (f.kind) {
    case FeatureKind::Attribute:
      j["kind"] = "attribute";
      j["name"] = f.name;
      j["type"] = {{"primitive", to_string(f.type.primitive)},
                   {"defaulted", f.type.defaulted},
                   {"collection", f.type.collection}};
      break;
    case FeatureKind::Aggregate:
      j["kind"] = "aggregate";
      j["name"] = f.name;
      j["target"] = f.target;
      j["targetVariation"] = f.target_variation;
      j["lower"] = f.cardinality.lower;
      j["upper"] = upper_to_string(f.cardinality.upper);
      break;
    case FeatureKind::Reference:
      j["kind"] = "reference";
      j["name"] = f.name;
      j["target"] = f.target;
      j["lower"] = f.cardinality.lower;
      j["upper"] = upper_to_string(f.cardinality.upper);
      break;
    case FeatureKind::Key:
      j["kind"] = "key";
      j["attribute"] = f.name;
      break;
  }
  return j;
}

Feature feature_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind"))
    throw FormatError("feature missing 'kind'", path);
  std::string kind = j["kind"].get<std::string>();
  Feature f;
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key))
      throw FormatError(std::string("feature missing '") + key + "'", path);
    return j[key];
  };
  auto cardinality = [&]() {
    Cardinality c;
    c.lower = need("lower").get<int>();
    if (c.lower != 0 && c.lower != 1)
      throw FormatError("cardinality lower bound must be 0 or 1", path);
    std::string upper = need("upper").get<std::string>();
    if (upper == "many") c.upper = CardinalityUpper::Many;
    else if (upper == "1") c.upper = CardinalityUpper::One;
    else throw FormatError("cardinality upper bound must be '1' or 'many'", path);
    return c;
  };
  if (kind == "attribute") {
    f.kind = FeatureKind::Attribute;
    f.name = need("name").get<std::string>();
    const Json& t = need("type");
    f.type.primitive = primitive_from_string(t.value("primitive", "string"), path);
    f.type.defaulted = t.value("defaulted", false);
    f.type.collection = t.value("collection", false);
    return f;
  }
  if (kind == "aggregate") {
    f.kind = FeatureKind::Aggregate;
    f.name = need("name").get<std::string>();
    f.target = need("target").get<std::string>();
    f.target_variation = j.value("targetVariation", 1);
    f.cardinality = cardinality();
    return f;
  }
  if (kind == "reference") {
    f.kind = FeatureKind::Reference;
    f.name = need("name").get<std::string>();
    f.target = need("target").get<std::string>();
    f.cardinality = cardinality();
    return f;
  }
  if (kind == "key") {
    f.kind = FeatureKind::Key;
    f.name = need("attribute").get<std::string>();
    return f;
  }
  throw FormatError("unknown feature kind '" + kind + "'", path);
}

}  // namespace

Json uschema_to_json(const USchemaModel& schema) {
  Json j;
  j["formatVersion"] = 1;
  j["name"] = schema.name;
  Json entities = Json::array();
  for (const auto& e : schema.entity_types) {
    Json je;
    je["name"] = e.name;
    je["root"] = e.root;
    Json variations = Json::array();
    for (const auto& v : e.variations) {
      Json jv;
      jv["id"] = v.id;
      Json features = Json::array();
      for (const auto& f : v.features) features.push_back(feature_to_json(f));
      jv["features"] = std::move(features);
      variations.push_back(std::move(jv));
    }
    je["variations"] = std::move(variations);
    entities.push_back(std::move(je));
  }
  j["entityTypes"] = std::move(entities);
  j["relationshipTypes"] = schema.relationship_types;
  return j;
}

std::string serialize(const USchemaModel& schema) {
  return uschema_to_json(schema).dump(2) + "\n";
}

USchemaModel uschema_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("schema must be a JSON object", "$");
  USchemaModel schema;
  if (!j.contains("name")) throw FormatError("schema missing 'name'", "$.name");
  schema.name = j["name"].get<std::string>();
  if (!j.contains("entityTypes") || !j["entityTypes"].is_array())
    throw FormatError("schema missing 'entityTypes' array", "$.entityTypes");

  std::size_t ei = 0;
  for (const auto& je : j["entityTypes"]) {
    std::string epath = "$.entityTypes[" + std::to_string(ei++) + "]";
    EntityType e;
    if (!je.contains("name")) throw FormatError("entity type missing 'name'", epath);
    e.name = je["name"].get<std::string>();
    for (const auto& existing : schema.entity_types)
      if (existing.name == e.name)
        throw FormatError("duplicate entity type '" + e.name + "'", epath);
    e.root = je.value("root", true);
    if (!je.contains("variations") || !je["variations"].is_array())
      throw FormatError("entity type '" + e.name + "' missing 'variations'", epath);
    std::size_t vi = 0;
    for (const auto& jv : je["variations"]) {
      std::string vpath = epath + ".variations[" + std::to_string(vi++) + "]";
      StructuralVariation v;
      v.id = jv.value("id", static_cast<int>(vi));
      if (!jv.contains("features") || !jv["features"].is_array())
        throw FormatError("variation of '" + e.name + "' missing 'features'", vpath);
      std::size_t fi = 0;
      for (const auto& jf : jv["features"]) {
        std::string fpath = vpath + ".features[" + std::to_string(fi++) + "]";
        v.features.push_back(feature_from_json(jf, fpath));
      }
      e.variations.push_back(std::move(v));
    }
    if (e.variations.empty())
      throw FormatError("entity type '" + e.name + "' has no variations", epath);
    schema.entity_types.push_back(std::move(e));
  }

  // Referential integrity: reference/aggregate targets must exist.
  for (const auto& e : schema.entity_types) {
    for (const auto& v : e.variations) {
      for (const auto& f : v.features) {
        if ((f.kind == FeatureKind::Reference || f.kind == FeatureKind::Aggregate) &&
            !schema.find_entity(f.target)) {
          throw FormatError("feature '" + f.name + "' of entity '" + e.name +
                                "' targets unknown entity '" + f.target + "'",
                            "$.entityTypes");
        }
      }
    }
  }
  return schema;
}

USchemaModel deserialize(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw FormatError(std::string("invalid schema JSON: ") + err.what(), "$");
  }
  return uschema_from_json(j);
}

}  // namespace sx
