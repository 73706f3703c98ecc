#include "schemaxray/api_profile.hpp"

#include <fstream>
#include <sstream>

#include "schemaxray/diagnostics.hpp"

namespace sx {

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::Read: return "read";
    case OpKind::Insert: return "insert";
    case OpKind::Update: return "update";
    case OpKind::Delete: return "delete";
    case OpKind::AggregateRead: return "aggregate-read";
  }
  return "read";
}

namespace {

OpKind op_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "read") return OpKind::Read;
  if (s == "insert") return OpKind::Insert;
  if (s == "update") return OpKind::Update;
  if (s == "delete") return OpKind::Delete;
  if (s == "aggregate-read") return OpKind::AggregateRead;
  throw FormatError("unknown operation kind '" + s + "'", path);
}

}  // namespace

const ProfileEntry* ApiProfile::match(const std::string& method) const {
  for (const auto& e : entries)
    if (e.method == method) return &e;
  return nullptr;
}

bool ApiProfile::is_connector(const std::string& method) const {
  for (const auto& c : connectors)
    if (c == method) return true;
  return false;
}

ApiProfile default_mongodb_profile() {
  ApiProfile p;
  p.name = "mongodb-node";
  p.connectors = {"db", "collection"};
  p.container_method = "collection";
  p.container_arg = 0;

  auto entry = [](std::string method, OpKind kind, int filter, int payload,
                  int callback, bool collection) {
    ProfileEntry e;
    e.method = std::move(method);
    e.kind = kind;
    e.filter_arg = filter;
    e.payload_arg = payload;
    e.callback_arg = callback;
    e.result_is_collection = collection;
    return e;
  };

  p.entries.push_back(entry("findOne", OpKind::Read, 0, -1, 1, false));
  p.entries.push_back(entry("find", OpKind::Read, 0, -1, 1, true));
  p.entries.push_back(entry("insertOne", OpKind::Insert, -1, 0, 1, false));
  p.entries.push_back(entry("updateOne", OpKind::Update, 0, 1, 2, false));
  p.entries.push_back(entry("deleteOne", OpKind::Delete, 0, -1, 1, false));
  p.entries.push_back(entry("aggregate", OpKind::AggregateRead, 0, -1, 1, true));
  return p;
}

ApiProfile profile_from_json(const Json& j) {
  ApiProfile p;
  if (!j.is_object()) throw FormatError("profile must be a JSON object", "$");
  p.name = j.value("name", "unnamed");
  if (!j.contains("connectors") || !j["connectors"].is_array())
    throw FormatError("profile missing 'connectors' array", "$.connectors");
  for (const auto& c : j["connectors"]) p.connectors.push_back(c.get<std::string>());
  if (!j.contains("containerResolution"))
    throw FormatError("profile missing 'containerResolution'", "$.containerResolution");
  p.container_method = j["containerResolution"].value("method", "collection");
  p.container_arg = j["containerResolution"].value("argIndex", 0);
  if (!j.contains("entries") || !j["entries"].is_array())
    throw FormatError("profile missing 'entries' array", "$.entries");

  std::size_t i = 0;
  for (const auto& je : j["entries"]) {
    std::string path = "$.entries[" + std::to_string(i++) + "]";
    ProfileEntry e;
    if (!je.contains("method")) throw FormatError("entry missing 'method'", path);
    e.method = je["method"].get<std::string>();
    for (const auto& other : p.entries)
      if (other.method == e.method)
        throw FormatError("duplicate method '" + e.method + "'", path);
    e.kind = op_kind_from_string(je.value("kind", "read"), path);
    e.filter_arg = je.value("filterArg", -1);
    e.payload_arg = je.value("payloadArg", -1);
    e.callback_arg = je.value("callbackArg", -1);
    e.result = je.value("result", "callback-param") == "return-value"
                   ? ResultBinding::ReturnValue
                   : ResultBinding::CallbackParam;
    e.result_param = je.value("resultParam", 1);
    e.result_is_collection = je.value("resultIsCollection",
                                      e.kind == OpKind::AggregateRead);
    p.entries.push_back(std::move(e));
  }
  return p;
}

ApiProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read profile file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& err) {
    throw FormatError(std::string("invalid profile JSON: ") + err.what(), path);
  }
  return profile_from_json(j);
}

Json profile_to_json(const ApiProfile& profile) {
  Json j;
  j["formatVersion"] = 1;
  j["name"] = profile.name;
  j["connectors"] = profile.connectors;
  j["containerResolution"] = {{"method", profile.container_method},
                              {"argIndex", profile.container_arg}};
  Json entries = Json::array();
  for (const auto& e : profile.entries) {
    Json je;
    je["method"] = e.method;
    je["kind"] = to_string(e.kind);
    if (e.filter_arg >= 0) je["filterArg"] = e.filter_arg;
    if (e.payload_arg >= 0) je["payloadArg"] = e.payload_arg;
    if (e.callback_arg >= 0) je["callbackArg"] = e.callback_arg;
    je["result"] = e.result == ResultBinding::ReturnValue ? "return-value" : "callback-param";
    je["resultParam"] = e.result_param;
    je["resultIsCollection"] = e.result_is_collection;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace sx
