#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schemaxray/code_json.hpp"

namespace sx {

enum class OpKind { Read, Insert, Update, Delete, AggregateRead };

std::string to_string(OpKind k);

enum class ResultBinding { CallbackParam, ReturnValue };

struct ProfileEntry {
  std::string method;
  OpKind kind = OpKind::Read;
  int filter_arg = -1;
  int payload_arg = -1;
  int callback_arg = -1;
  ResultBinding result = ResultBinding::CallbackParam;
  int result_param = 1;  // index of the data param in (err, data) callbacks
  bool result_is_collection = false;  // find/aggregate yield arrays of documents
};

// Maps driver method names to CRUD roles so detection stays driver-agnostic.
struct ApiProfile {
  std::string name;
  std::vector<std::string> connectors;   // e.g. db, collection
  std::string container_method;          // method whose argument names the container
  int container_arg = 0;
  std::vector<ProfileEntry> entries;

  const ProfileEntry* match(const std::string& method) const;
  bool is_connector(const std::string& method) const;
};

// Bundled MongoDB Node-driver profile (db/collection/findOne/find/insertOne/
// updateOne/deleteOne/aggregate).
ApiProfile default_mongodb_profile();

ApiProfile profile_from_json(const Json& j);
ApiProfile load_profile(const std::string& path);
Json profile_to_json(const ApiProfile& profile);

}  // namespace sx
