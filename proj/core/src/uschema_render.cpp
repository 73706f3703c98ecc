#include "schemaxray/uschema.hpp"

namespace sx {

namespace {

std::string render_text(const USchemaModel& schema) {
  std::string out;
  if (!schema.name.empty()) out += "schema " + schema.name + "\n";
  for (const auto& e : schema.entity_types) {
    if (!out.empty()) out += "\n";
    out += "entity " + e.name + (e.root ? " (root)" : "") + " {\n";
    for (const auto& v : e.variations) {
      if (e.variations.size() > 1) out += "  variation " + std::to_string(v.id) + "\n";
      for (const auto& f : v.features) {
        switch (f.kind) {
          case FeatureKind::Attribute:
            out += "  attr " + f.name + ": " + f.type.render() + "\n";
            break;
          case FeatureKind::Aggregate:
            out += "  agg " + f.name + " -> " + f.target + " [" +
                   f.cardinality.render() + "]\n";
            break;
          case FeatureKind::Reference:
            out += "  ref " + f.name + " -> " + f.target + " [" +
                   f.cardinality.render() + "]\n";
            break;
          case FeatureKind::Key:
            out += "  key " + f.name + "\n";
            break;
        }
      }
    }
    out += "}\n";
  }
  return out;
}

std::string escape_record(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<' || c == '>' || c == '|' || c == '{' || c == '}' || c == '"')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string render_dot(const USchemaModel& schema) {
  std::string out = "digraph uschema {\n";
  out += "  node [shape=record];\n";
  for (const auto& e : schema.entity_types) {
    std::string label = e.name + (e.root ? "" : " (non-root)");
    std::string attrs;
    for (const auto& v : e.variations) {
      for (const auto& f : v.features) {
        if (f.kind == FeatureKind::Attribute)
          attrs += escape_record(f.name + ": " + f.type.render()) + "\\l";
        if (f.kind == FeatureKind::Key) attrs += escape_record("key " + f.name) + "\\l";
      }
    }
    out += "  \"" + e.name + "\" [label=\"{" + escape_record(label) + "|" + attrs + "}\"];\n";
  }
  for (const auto& e : schema.entity_types) {
    for (const auto& v : e.variations) {
      for (const auto& f : v.features) {
        if (f.kind == FeatureKind::Aggregate) {
          out += "  \"" + e.name + "\" -> \"" + f.target + "\" [label=\"" + f.name +
                 " [" + f.cardinality.render() + "]\"];\n";
        } else if (f.kind == FeatureKind::Reference) {
          out += "  \"" + e.name + "\" -> \"" + f.target + "\" [style=dashed, label=\"" +
                 f.name + " [" + f.cardinality.render() + "]\"];\n";
        }
      }
    }
  }
  out += "}\n";
  return out;
}

}  // namespace

std::string render(const USchemaModel& schema, RenderFormat format) {
  return format == RenderFormat::Text ? render_text(schema) : render_dot(schema);
}

}  // namespace sx
