#include "schemaxray/refactor.hpp"

namespace sx {

namespace {

std::string capitalize(const std::string& s) {
  std::string out = s;
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string join_path(const std::vector<std::string>& parts, const std::string& leaf) {
  std::string out;
  for (const auto& p : parts) out += p + ".";
  out += leaf;
  return out;
}

}  // namespace

std::string emit_copy(const JoinRemovalPlan& plan) {
  std::string out;
  for (const auto& entry : plan.entries) {
    if (!out.empty()) out += "\n";
    std::string fields;
    for (std::size_t i = 0; i < entry.fields.size(); ++i) {
      if (i) fields += ",";
      fields += entry.fields[i];
    }
    std::string to_path = entry.reverse
                              ? entry.target_attribute
                              : join_path(entry.destination_path, entry.ref_leaf);
    std::string where = entry.reverse
                            ? entry.target_attribute + " = " + entry.ref_leaf
                            : entry.ref_leaf + " = " + entry.target_attribute;
    out += "COPY " + capitalize(entry.referenced_container) + "::{" + fields + "} TO " +
           capitalize(plan.source_container) + "::" + to_path + " WHERE " + where;
  }
  return out;
}

std::string emit_migration(const JoinRemovalPlan& plan) {
  const std::string host = plan.source_container;
  std::string out;
  out += "// Data update for join removal plan " + plan.id + "\n";
  out += "// Run with: mongosh <database> <this file>\n";
  out += "db." + host + ".find().forEach(function (doc) {\n";

  for (const auto& entry : plan.entries) {
    std::string indent = "  ";
    std::string cursor = "doc";
    std::string closing;

    // Walk the aggregate chain to the structure holding the reference.
    for (std::size_t i = 0; i < entry.destination_path.size(); ++i) {
      const std::string& part = entry.destination_path[i];
      bool is_collection = i < entry.destination_path_collection.size() &&
                           entry.destination_path_collection[i];
      if (is_collection) {
        std::string item = "item" + (closing.empty() ? "" : std::to_string(i));
        out += indent + cursor + "." + part + ".forEach(function (" + item + ") {\n";
        closing = indent + "});\n" + closing;
        indent += "  ";
        cursor = item;
      } else {
        cursor += "." + part;
      }
    }

    // Resolve the referenced document.
    std::string filter;
    if (entry.reverse) {
      filter = "{ " + entry.ref_leaf + ": " + cursor + "." + entry.target_attribute + " }";
    } else if (entry.ref_leaf_collection) {
      filter = "{ " + entry.target_attribute + ": { $in: " + cursor + "." +
               entry.ref_leaf + " } }";
    } else {
      filter = "{ " + entry.target_attribute + ": " + cursor + "." + entry.ref_leaf + " }";
    }
    out += indent + "var ref = db." + entry.referenced_container + ".findOne(" +
           filter + ");\n";
    out += indent + "if (ref) {\n";
    if (entry.fields.size() == 1) {
      out += indent + "  " + cursor + "." + entry.new_names.front() + " = ref." +
             entry.fields.front() + ";\n";
    } else {
      out += indent + "  " + cursor + "." + entry.stem + " = {";
      for (std::size_t i = 0; i < entry.fields.size(); ++i) {
        if (i) out += ",";
        out += " " + entry.fields[i] + ": ref." + entry.fields[i];
      }
      out += " };\n";
    }
    out += indent + "}\n";
    out += closing;
  }

  out += "  db." + host + ".save(doc);\n";
  out += "});\n";
  return out;
}

}  // namespace sx
