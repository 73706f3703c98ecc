#include "schemaxray/dos.hpp"

namespace sx {

namespace {

Json type_to_json(const DosFieldType& t) {
  Json base;
  switch (t.base) {
    case DosBaseKind::Attribute:
      base["kind"] = "attribute";
      base["type"] = to_string(t.primitive);
      base["defaulted"] = t.defaulted;
      break;
    case DosBaseKind::Aggregate:
      base["kind"] = "aggregate";
      base["structure"] = t.structure;
      break;
    case DosBaseKind::Reference:
      base["kind"] = "reference";
      base["targetContainer"] = t.target_container;
      base["targetAttribute"] = t.target_attribute;
      break;
  }
  if (!t.collection) return base;
  Json j;
  j["kind"] = "collection";
  j["element"] = std::move(base);
  return j;
}

Json predicate_to_json(const Predicate& p) {
  Json conjuncts = Json::array();
  for (const auto& c : p.conjuncts) {
    Json jc;
    jc["field"] = c.field_path;
    jc["op"] = "eq";
    if (c.rhs.is_literal) {
      jc["rhs"] = {{"kind", "literal"},
                   {"type", to_string(c.rhs.literal_kind)},
                   {"lexeme", c.rhs.lexeme}};
    } else {
      jc["rhs"] = {{"kind", "variablePath"}, {"path", c.rhs.path.render()}};
    }
    conjuncts.push_back(std::move(jc));
  }
  return {{"conjuncts", std::move(conjuncts)}};
}

}  // namespace

Json dos_to_json(const DOSModel& dos) {
  Json j;
  j["formatVersion"] = 1;

  Json ops = Json::array();
  for (const auto& op : dos.operations) {
    Json jo;
    jo["kind"] = to_string(op.kind);
    jo["stmtRef"] = op.stmt.valid() ? Json(op.stmt.value) : Json(nullptr);
    jo["callRef"] = op.call_expr.valid() ? Json(op.call_expr.value) : Json(nullptr);
    jo["container"] = op.container;
    jo["resultVariable"] = op.result_variable ? Json(*op.result_variable) : Json(nullptr);
    jo["filter"] = op.filter ? predicate_to_json(*op.filter) : Json(nullptr);
    jo["prevDBO"] = op.prev >= 0 ? Json(op.prev) : Json(nullptr);
    jo["nextDBO"] = op.next >= 0 ? Json(op.next) : Json(nullptr);
    jo["isJoin"] = op.is_join;
    jo["resultDS"] = op.result_structure >= 0 ? Json(op.result_structure) : Json(nullptr);
    jo["params"] = op.params;
    if (!op.lookups.empty()) {
      Json lookups = Json::array();
      for (const auto& l : op.lookups) {
        lookups.push_back({{"from", l.from},
                           {"localField", l.local_field},
                           {"foreignField", l.foreign_field},
                           {"as", l.as}});
      }
      jo["lookups"] = std::move(lookups);
    }
    ops.push_back(std::move(jo));
  }
  j["operations"] = std::move(ops);

  Json containers = Json::array();
  for (const auto& c : dos.containers) {
    containers.push_back({{"name", c.name}, {"dataStructures", c.structures}});
  }
  j["containers"] = std::move(containers);

  Json structures = Json::array();
  for (const auto& ds : dos.structures) {
    Json fields = Json::array();
    for (const auto& f : ds.fields) {
      Json jf;
      jf["name"] = f.name;
      jf["type"] = type_to_json(f.type);
      if (f.duplicated_from) {
        jf["duplicatedFrom"] = {{"container", f.duplicated_from->container},
                                {"field", f.duplicated_from->field}};
      }
      fields.push_back(std::move(jf));
    }
    structures.push_back({{"id", ds.id}, {"fields", std::move(fields)}});
  }
  j["structures"] = std::move(structures);

  Json refs = Json::array();
  for (const auto& r : dos.references) {
    refs.push_back({{"joinOp", r.join_op},
                    {"lookup", r.lookup >= 0 ? Json(r.lookup) : Json(nullptr)},
                    {"refContainer", r.ref_container},
                    {"refFieldPath", r.ref_field_path},
                    {"targetContainer", r.target_container},
                    {"targetAttribute", r.target_attribute}});
  }
  j["references"] = std::move(refs);
  return j;
}

}  // namespace sx
