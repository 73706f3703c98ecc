#include "schemaxray/roundtrip.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "schemaxray/diagnostics.hpp"

namespace sx {

const SpecEntity* SchemaSpec::find(const std::string& name) const {
  for (const auto& e : entities)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

PrimitiveType primitive_from(const std::string& s, const std::string& path) {
  if (s == "string") return PrimitiveType::String;
  if (s == "int") return PrimitiveType::Int;
  if (s == "double") return PrimitiveType::Double;
  if (s == "bool") return PrimitiveType::Bool;
  throw FormatError("unknown attribute type '" + s + "'", path);
}

SpecRelation relation_from_json(const Json& j, const std::string& path) {
  SpecRelation r;
  if (!j.contains("name") || !j.contains("target"))
    throw FormatError("relation needs 'name' and 'target'", path);
  r.name = j["name"].get<std::string>();
  r.target = j["target"].get<std::string>();
  r.lower = j.value("lower", 0);
  r.upper = j.value("upper", "1") == std::string("many") ? CardinalityUpper::Many
                                                         : CardinalityUpper::One;
  return r;
}

}  // namespace

SchemaSpec schema_spec_from_json(const Json& j) {
  SchemaSpec spec;
  if (!j.is_object() || !j.contains("entities"))
    throw FormatError("schema spec needs an 'entities' array", "$");
  spec.name = j.value("name", "app");
  std::size_t i = 0;
  for (const auto& je : j["entities"]) {
    std::string path = "$.entities[" + std::to_string(i++) + "]";
    SpecEntity e;
    if (!je.contains("name")) throw FormatError("entity needs a 'name'", path);
    e.name = je["name"].get<std::string>();
    e.root = je.value("root", true);
    for (const auto& ja : je.value("attributes", Json::array())) {
      SpecAttribute a;
      a.name = ja["name"].get<std::string>();
      a.type = primitive_from(ja.value("type", "string"), path);
      e.attributes.push_back(std::move(a));
    }
    for (const auto& jr : je.value("aggregates", Json::array()))
      e.aggregates.push_back(relation_from_json(jr, path));
    for (const auto& jr : je.value("references", Json::array()))
      e.references.push_back(relation_from_json(jr, path));
    spec.entities.push_back(std::move(e));
  }
  // Targets must resolve.
  for (const auto& e : spec.entities) {
    for (const auto& r : e.aggregates)
      if (!spec.find(r.target))
        throw SpecError("aggregate '" + r.name + "' of '" + e.name +
                        "' targets unknown entity '" + r.target + "'");
    for (const auto& r : e.references)
      if (!spec.find(r.target))
        throw SpecError("reference '" + r.name + "' of '" + e.name +
                        "' targets unknown entity '" + r.target + "'");
  }
  return spec;
}

SchemaSpec load_schema_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read schema spec: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& err) {
    throw FormatError(std::string("invalid schema spec JSON: ") + err.what(), path);
  }
  return schema_spec_from_json(j);
}

USchemaModel designed_schema(const SchemaSpec& spec) {
  USchemaModel schema;
  schema.name = spec.name;
  for (const auto& e : spec.entities) {
    EntityType entity;
    entity.name = e.name;
    entity.root = e.root;
    StructuralVariation v;
    v.id = 1;
    for (const auto& a : e.attributes) {
      Feature f;
      f.kind = FeatureKind::Attribute;
      f.name = a.name;
      f.type.primitive = a.type;
      v.features.push_back(std::move(f));
      if (a.name == "_id") {
        Feature key;
        key.kind = FeatureKind::Key;
        key.name = "_id";
        v.features.push_back(std::move(key));
      }
    }
    for (const auto& r : e.aggregates) {
      Feature f;
      f.kind = FeatureKind::Aggregate;
      f.name = r.name;
      f.target = r.target;
      f.cardinality.lower = r.lower;
      f.cardinality.upper = r.upper;
      v.features.push_back(std::move(f));
    }
    for (const auto& r : e.references) {
      Feature f;
      f.kind = FeatureKind::Reference;
      f.name = r.name;
      f.target = r.target;
      f.cardinality.lower = r.lower;
      f.cardinality.upper = r.upper;
      v.features.push_back(std::move(f));
    }
    entity.variations.push_back(std::move(v));
    schema.entity_types.push_back(std::move(entity));
  }
  return schema;
}

// --- application generation -------------------------------------------------

namespace {

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = char(s[0] - 'A' + 'a');
  return s;
}

std::string upper_first(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = char(s[0] - 'a' + 'A');
  return s;
}

std::string singular(const std::string& s) {
  if (s.size() > 1 && s.back() == 's') return s.substr(0, s.size() - 1);
  return s;
}

std::string container_of(const std::string& entity) { return lower_first(entity) + "s"; }

// Deterministic sample values; modulo keeps the stream portable.
struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  std::string word() {
    static const char* words[] = {"Marisol", "Dakota", "Winslow", "Aurora",
                                  "Juniper", "Sable",  "Orion",   "Calloway"};
    return words[rng() % 8];
  }
  int number() { return static_cast<int>(rng() % 90 + 10); }
};

struct Generator {
  const SchemaSpec& spec;
  Sampler sample;
  std::string db_name;

  Generator(const SchemaSpec& s, std::uint64_t seed)
      : spec(s), sample(seed), db_name(lower_first(s.name) + "db") {}

  const SpecAttribute* first_attr(const SpecEntity& e, bool skip_id = true) const {
    for (const auto& a : e.attributes)
      if (!skip_id || a.name != "_id") return &a;
    return nullptr;
  }

  const SpecAttribute* first_int_attr(const SpecEntity& e) const {
    for (const auto& a : e.attributes)
      if (a.name != "_id" && (a.type == PrimitiveType::Int || a.type == PrimitiveType::Double))
        return &a;
    return nullptr;
  }

  bool is_leaf(const SpecEntity& e) const { return e.references.empty(); }

  bool has_incoming_reference(const std::string& entity) const {
    for (const auto& other : spec.entities)
      for (const auto& r : other.references)
        if (r.target == entity) return true;
    return false;
  }

  std::string collection_call(const std::string& container) const {
    return "client.db(dbName).collection('" + container + "')";
  }

  std::string sample_literal(const SpecAttribute& attr) {
    if (attr.type == PrimitiveType::Int || attr.type == PrimitiveType::Double)
      return std::to_string(sample.number());
    return "'" + sample.word() + "'";
  }

  std::string validation_line(const std::string& var, const SpecAttribute& attr) const {
    std::string cond = attr.type == PrimitiveType::Int || attr.type == PrimitiveType::Double
                           ? var + " <= 0"
                           : var + " === ''";
    if (attr.type == PrimitiveType::Bool) return "";
    return "  if (" + cond + ") {\n    console.log('" + var + " is not valid');\n  }\n";
  }

  // Aggregate read-access lines: condition on the first numeric attribute,
  // log the remaining ones.
  std::string aggregate_access(const std::string& var, const SpecRelation& agg,
                               int indent) const {
    const SpecEntity* target = spec.find(agg.target);
    if (!target || target->attributes.empty()) return "";
    std::string pad(static_cast<std::size_t>(indent), ' ');
    const SpecAttribute* num = nullptr;
    for (const auto& a : target->attributes)
      if (a.type == PrimitiveType::Int || a.type == PrimitiveType::Double) {
        num = &a;
        break;
      }
    std::string base = var + "." + agg.name;
    std::string out;
    if (num) {
      out += pad + "if (" + base + "." + num->name + " >= 0) {\n";
      for (const auto& a : target->attributes)
        if (&a != num) out += pad + "  console.log(" + base + "." + a.name + ");\n";
      if (target->attributes.size() == 1)
        out += pad + "  console.log(" + base + "." + num->name + ");\n";
      out += pad + "}\n";
    } else {
      for (const auto& a : target->attributes)
        out += pad + "console.log(" + base + "." + a.name + ");\n";
    }
    return out;
  }

  std::string entity_file(const SpecEntity& e, bool with_get) {
    const std::string container = container_of(e.name);
    const std::string var = lower_first(e.name);
    std::string out;
    out += "const client = require('./index').client;\n";
    out += "const dbName = '" + db_name + "';\n";

    // create
    std::string params, payload;
    for (const auto& a : e.attributes) {
      if (a.name == "_id") continue;
      if (!params.empty()) params += ", ";
      params += a.name;
      if (!payload.empty()) payload += ", ";
      payload += a.name + ": " + a.name;
    }
    for (const auto& r : e.references) {
      if (!params.empty()) params += ", ";
      params += r.name;
      if (!payload.empty()) payload += ", ";
      payload += r.name + ": " + r.name;
    }
    for (const auto& r : e.aggregates) {
      if (!params.empty()) params += ", ";
      params += r.name;
      if (!payload.empty()) payload += ", ";
      payload += r.name + ": " + r.name;
    }
    out += "function create" + e.name + "(" + params + (params.empty() ? "" : ", ") +
           "done) {\n";
    for (const auto& a : e.attributes) {
      if (a.name == "_id") continue;
      out += validation_line(a.name, a);
    }
    out += "  " + collection_call(container) + ".insertOne({ " + payload + " }, done);\n";
    out += "}\n";

    // update: the first two non-id attributes
    std::string set_params, set_payload;
    int count = 0;
    for (const auto& a : e.attributes) {
      if (a.name == "_id" || count == 2) continue;
      ++count;
      set_params += ", " + a.name;
      if (!set_payload.empty()) set_payload += ", ";
      set_payload += a.name + ": " + a.name;
    }
    out += "function update" + e.name + "(id" + set_params + ", done) {\n";
    out += "  " + collection_call(container) + ".updateOne({ _id: id }, { $set: { " +
           set_payload + " } }, done);\n";
    out += "}\n";

    out += "function remove" + e.name + "(id, done) {\n";
    out += "  " + collection_call(container) + ".deleteOne({ _id: id }, done);\n";
    out += "}\n";

    out += "function list" + e.name + "s(done) {\n";
    out += "  " + collection_call(container) + ".find({}, done);\n";
    out += "}\n";

    std::string exports = "create" + e.name + ": create" + e.name + ", update" + e.name +
                          ": update" + e.name + ", remove" + e.name + ": remove" + e.name +
                          ", list" + e.name + "s: list" + e.name + "s";
    if (with_get) {
      out += "function get" + e.name + "(id, done) {\n";
      out += "  " + collection_call(container) + ".findOne({ _id: id }, (err, " + var +
             ") => {\n";
      for (const auto& agg : e.aggregates) out += aggregate_access(var, agg, 4);
      if (const SpecAttribute* attr = first_attr(e))
        out += "    console.log(" + var + "." + attr->name + ");\n";
      out += "    done(" + var + ");\n";
      out += "  });\n";
      out += "}\n";
      exports += ", get" + e.name + ": get" + e.name;
    }

    out += "module.exports = { " + exports + " };\n";
    return out;
  }

  // Sequential join: read the owner by its first attribute, then the target
  // by identifier, and use both results together.
  std::string sequential_join(const SpecEntity& owner, const SpecRelation& ref) {
    const SpecEntity& target = *spec.find(ref.target);
    const std::string owner_var = lower_first(owner.name);
    const std::string target_var = lower_first(target.name);
    const SpecAttribute* owner_attr = first_attr(owner);
    const SpecAttribute* target_attr = first_attr(target);
    std::string name = lower_first(owner.name) + upper_first(singular(ref.name)) + "Details";

    std::string out;
    out += "function " + name + "() {\n";
    out += "  " + collection_call(container_of(owner.name)) + ".findOne({ " +
           (owner_attr ? owner_attr->name : "_id") + ": " +
           (owner_attr ? sample_literal(*owner_attr) : "''") + " }, (err, " + owner_var +
           ") => {\n";
    for (const auto& agg : owner.aggregates) out += aggregate_access(owner_var, agg, 4);
    std::string index_access = owner_var + "." + ref.name +
                               (ref.upper == CardinalityUpper::Many ? "[0]" : "");
    out += "    " + collection_call(container_of(target.name)) + ".findOne({ _id: " +
           index_access + " }, (err, " + target_var + ") => {\n";
    out += "      console.log(" + owner_var + "." +
           (owner_attr ? owner_attr->name : "_id") + " + ' - ' + " + target_var + "." +
           (target_attr ? target_attr->name : "_id") + ");\n";
    out += "    });\n";
    out += "  });\n";
    out += "}\n";
    return out;
  }

  struct DetailLookup {
    std::string from;
    std::string local_field;
    std::string foreign_field;
    std::string as;
    std::vector<std::string> accessed;  // fields of the target to read
    bool unwind = true;
  };

  // "Full detail" aggregation on `entity`: forward lookups for scalar
  // references, reverse lookups for collection references held by entities
  // nobody else references.
  std::string detail_aggregate(const SpecEntity& entity,
                               const std::vector<DetailLookup>& lookups) {
    const std::string container = container_of(entity.name);
    const std::string var = container;
    std::string name = container + "Full";
    std::string out;
    out += "function " + name + "() {\n";
    std::string pipeline;
    if (const SpecAttribute* num = first_int_attr(entity))
      pipeline += "{ $match: { " + num->name + ": " + std::to_string(sample.number()) +
                  " } }, ";
    for (const auto& l : lookups) {
      pipeline += "{ $lookup: { from: '" + l.from + "', localField: '" + l.local_field +
                  "', foreignField: '" + l.foreign_field + "', as: '" + l.as + "' } }, ";
      if (l.unwind) pipeline += "{ $unwind: '$" + l.as + "' }, ";
    }
    if (!pipeline.empty()) pipeline.resize(pipeline.size() - 2);
    out += "  " + collection_call(container) + ".aggregate([" + pipeline + "], (err, " +
           var + ") => {\n";
    const SpecAttribute* own = first_attr(entity);
    std::string log = var + "[0]." + (own ? own->name : "_id");
    for (const auto& l : lookups)
      for (const auto& field : l.accessed)
        log += " + ' - ' + " + var + "[0]." + l.as + "." + field;
    out += "    console.log(" + log + ");\n";
    out += "  });\n";
    out += "}\n";
    return out;
  }

  // Aggregation over a collection reference to a leaf entity.
  std::string leaf_lookup_aggregate(const SpecEntity& entity, const SpecRelation& ref) {
    const SpecEntity& target = *spec.find(ref.target);
    const std::string container = container_of(entity.name);
    const std::string var = container;
    const std::string as = lower_first(target.name) + "List";
    std::string name = container + "With" + upper_first(ref.name);
    const SpecAttribute* own = first_attr(entity);
    const SpecAttribute* target_attr = first_attr(target);

    std::string out;
    out += "function " + name + "() {\n";
    out += "  " + collection_call(container) + ".aggregate([{ $lookup: { from: '" +
           container_of(target.name) + "', localField: '" + ref.name +
           "', foreignField: '_id', as: '" + as + "' } }], (err, " + var + ") => {\n";
    out += "    console.log(" + var + "[0]." + (own ? own->name : "_id") + " + ': ' + " +
           var + "[0]." + as + "[0]." + (target_attr ? target_attr->name : "_id") + ");\n";
    if (ref.upper == CardinalityUpper::Many)
      out += "    console.log(" + var + "[0]." + ref.name + "[0]);\n";
    out += "  });\n";
    out += "}\n";
    return out;
  }
};

}  // namespace

std::vector<SourceFile> generate_app(const SchemaSpec& spec, std::uint64_t seed) {
  Generator gen(spec, seed);

  std::vector<const SpecEntity*> roots;
  for (const auto& e : spec.entities)
    if (e.root) roots.push_back(&e);

  // Sequential-join owners get their findOne inside the join handler;
  // everything else keeps a plain get handler so every entity has full CRUD.
  std::set<std::string> seq_join_owner;
  for (const SpecEntity* owner : roots) {
    for (const auto& ref : owner->references) {
      const SpecEntity* target = spec.find(ref.target);
      if (ref.upper == CardinalityUpper::Many && !gen.is_leaf(*target))
        seq_join_owner.insert(owner->name);
    }
  }

  std::vector<SourceFile> files;
  std::vector<std::string> route_modules;
  for (const SpecEntity* e : roots) {
    bool with_get = !seq_join_owner.count(e->name);
    files.push_back({lower_first(e->name) + ".routes.js", gen.entity_file(*e, with_get)});
    route_modules.push_back(lower_first(e->name));
  }

  // index.js: client setup, route wiring and the cross-entity join handlers.
  std::string index;
  index += "const MongoClient = require('mongodb').MongoClient;\n";
  index += "const url = 'mongodb://localhost:27017';\n";
  index += "const dbName = '" + gen.db_name + "';\n";
  index += "const client = new MongoClient(url);\n";
  for (const auto& m : route_modules)
    index += "const " + m + "Routes = require('./" + m + ".routes');\n";

  std::vector<std::string> handler_names;
  for (const SpecEntity* entity : roots) {
    // (a) full-detail aggregation on this entity
    std::vector<Generator::DetailLookup> lookups;
    for (const auto& ref : entity->references) {
      if (ref.upper != CardinalityUpper::One) continue;
      const SpecEntity& target = *spec.find(ref.target);
      Generator::DetailLookup l;
      l.from = container_of(target.name);
      l.local_field = ref.name;
      l.foreign_field = "_id";
      l.as = ref.name.size() > 3 && ref.name.ends_with("_id")
                 ? ref.name.substr(0, ref.name.size() - 3)
                 : lower_first(target.name);
      const SpecAttribute* a1 = gen.first_attr(target);
      if (a1) l.accessed.push_back(a1->name);
      for (const auto& a : target.attributes)
        if (a.name != "_id" && a1 && a.name != a1->name) {
          l.accessed.push_back(a.name);
          break;
        }
      lookups.push_back(std::move(l));
    }
    for (const SpecEntity* owner : roots) {
      if (gen.has_incoming_reference(owner->name)) continue;
      for (const auto& ref : owner->references) {
        if (ref.target != entity->name || ref.upper != CardinalityUpper::Many) continue;
        Generator::DetailLookup l;
        l.from = container_of(owner->name);
        l.local_field = "_id";
        l.foreign_field = ref.name;
        l.as = lower_first(owner->name);
        if (const SpecAttribute* a = gen.first_attr(*owner)) l.accessed.push_back(a->name);
        lookups.push_back(std::move(l));
      }
    }
    if (!lookups.empty()) {
      index += gen.detail_aggregate(*entity, lookups);
      handler_names.push_back(container_of(entity->name) + "Full");
    }

    // (b) sequential joins owned by this entity
    for (const auto& ref : entity->references) {
      const SpecEntity* target = spec.find(ref.target);
      if (ref.upper == CardinalityUpper::Many && !gen.is_leaf(*target)) {
        index += gen.sequential_join(*entity, ref);
        handler_names.push_back(lower_first(entity->name) +
                                upper_first(singular(ref.name)) + "Details");
      }
    }

    // (c) collection references to leaf entities: $lookup aggregations
    for (const auto& ref : entity->references) {
      const SpecEntity* target = spec.find(ref.target);
      if (ref.upper == CardinalityUpper::Many && gen.is_leaf(*target)) {
        index += gen.leaf_lookup_aggregate(*entity, ref);
        handler_names.push_back(container_of(entity->name) + "With" +
                                upper_first(ref.name));
      }
    }
  }

  std::string exports = "client: client";
  for (const auto& m : route_modules) exports += ", " + m + "Routes: " + m + "Routes";
  for (const auto& h : handler_names) exports += ", " + h + ": " + h;
  index += "module.exports = { " + exports + " };\n";
  files.push_back({"index.js", std::move(index)});

  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return files;
}

// --- comparison ---------------------------------------------------------------

namespace {

const StructuralVariation* main_variation(const EntityType& e) {
  return e.variations.empty() ? nullptr : &e.variations.front();
}

}  // namespace

RoundTripReport compare(const USchemaModel& designed, const USchemaModel& extracted) {
  RoundTripReport report;

  for (const auto& e : designed.entity_types) {
    report.entities.expected++;
    if (extracted.find_entity(e.name)) report.entities.matched++;
  }
  report.entities.actual = static_cast<int>(extracted.entity_types.size());

  for (const auto& exp_entity : designed.entity_types) {
    const EntityType* act_entity = extracted.find_entity(exp_entity.name);
    const StructuralVariation* exp_var = main_variation(exp_entity);
    const StructuralVariation* act_var = act_entity ? main_variation(*act_entity) : nullptr;
    if (!exp_var) continue;

    for (const auto& f : exp_var->features) {
      CategoryScore* score = nullptr;
      if (f.kind == FeatureKind::Attribute) score = &report.attributes;
      if (f.kind == FeatureKind::Reference) score = &report.references;
      if (f.kind == FeatureKind::Aggregate) score = &report.aggregates;
      if (!score) continue;
      score->expected++;
      if (!act_var) continue;
      for (const auto& g : act_var->features) {
        if (g.kind != f.kind || g.name != f.name) continue;
        if ((f.kind == FeatureKind::Reference || f.kind == FeatureKind::Aggregate) &&
            g.target != f.target)
          continue;
        score->matched++;
        if (f.kind == FeatureKind::Attribute && g.type.defaulted &&
            f.type.primitive != PrimitiveType::String &&
            g.type.primitive == PrimitiveType::String)
          report.defaulted_type_count++;
        if ((f.kind == FeatureKind::Reference || f.kind == FeatureKind::Aggregate) &&
            f.cardinality.lower == 1 && g.cardinality.lower == 0)
          report.lowered_cardinality_count++;
        break;
      }
    }
  }

  for (const auto& act_entity : extracted.entity_types) {
    const StructuralVariation* act_var = main_variation(act_entity);
    if (!act_var) continue;
    for (const auto& g : act_var->features) {
      if (g.kind == FeatureKind::Attribute) report.attributes.actual++;
      if (g.kind == FeatureKind::Reference) report.references.actual++;
      if (g.kind == FeatureKind::Aggregate) report.aggregates.actual++;
    }
  }
  return report;
}

Json RoundTripReport::to_json() const {
  auto score = [](const CategoryScore& s) {
    return Json{{"expected", s.expected},
                {"actual", s.actual},
                {"matched", s.matched},
                {"precision", s.precision()},
                {"recall", s.recall()}};
  };
  Json j;
  j["formatVersion"] = 1;
  j["entities"] = score(entities);
  j["attributes"] = score(attributes);
  j["references"] = score(references);
  j["aggregates"] = score(aggregates);
  j["defaultedTypeCount"] = defaulted_type_count;
  j["loweredCardinalityCount"] = lowered_cardinality_count;
  j["operationCount"] = op_count;
  j["joinCount"] = join_count;
  return j;
}

std::string RoundTripReport::render() const {
  auto line = [](const char* name, const CategoryScore& s) {
    std::ostringstream out;
    out << name << ": precision=" << s.precision() << " recall=" << s.recall() << " ("
        << s.matched << "/" << s.expected << " expected, " << s.actual << " extracted)\n";
    return out.str();
  };
  std::string out;
  out += line("entities", entities);
  out += line("attributes", attributes);
  out += line("references", references);
  out += line("aggregates", aggregates);
  out += "defaulted types: " + std::to_string(defaulted_type_count) + "\n";
  out += "lowered cardinalities: " + std::to_string(lowered_cardinality_count) + "\n";
  out += "operations: " + std::to_string(op_count) + "\n";
  out += "joins: " + std::to_string(join_count) + "\n";
  return out;
}

}  // namespace sx
