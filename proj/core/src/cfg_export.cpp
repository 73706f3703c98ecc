#include "schemaxray/cfg.hpp"

namespace sx {

namespace {

std::string node_label(const CfgNode& n) {
  switch (n.kind) {
    case CfgNodeKind::Start: return "start";
    case CfgNodeKind::End: return "end";
    default:
      return to_string(n.kind) + ":" + (n.line > 0 ? std::to_string(n.line) : "");
  }
}

std::string export_dot(const ControlFlowModel& cfg) {
  std::string out = "digraph cfg {\n";
  for (std::size_t sg = 0; sg < cfg.subgraphs.size(); ++sg) {
    const SubGraph& g = cfg.subgraphs[sg];
    out += "  subgraph cluster_" + std::to_string(sg) + " {\n";
    out += "    label=\"" + std::to_string(sg) + ":" +
           (g.kind == SubGraphKind::CodeBlock ? std::string("codeBlock")
                                              : std::string("callable")) +
           "\";\n";
    for (int n : g.nodes) {
      out += "    n" + std::to_string(n) + " [label=\"" +
             node_label(cfg.nodes[static_cast<std::size_t>(n)]) + "\"];\n";
    }
    out += "  }\n";
  }
  for (const CfgEdge& e : cfg.edges) {
    out += "  n" + std::to_string(e.source) + " -> n" + std::to_string(e.target) +
           " [label=\"" + to_string(e.kind) + "\"";
    if (e.kind == CfgEdgeKind::Call) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string cypher_label(CfgNodeKind k) {
  switch (k) {
    case CfgNodeKind::Start: return "Start";
    case CfgNodeKind::End: return "End";
    case CfgNodeKind::Call: return "Call";
    case CfgNodeKind::Selection: return "Selection";
    case CfgNodeKind::Statement: return "Statement";
  }
  return "Statement";
}

std::string cypher_rel(CfgEdgeKind k) {
  switch (k) {
    case CfgEdgeKind::Seq: return "SEQ";
    case CfgEdgeKind::Call: return "CALL";
    case CfgEdgeKind::CondTrue: return "COND_TRUE";
    case CfgEdgeKind::CondFalse: return "COND_FALSE";
  }
  return "SEQ";
}

std::string export_cypher(const ControlFlowModel& cfg) {
  std::string out;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const CfgNode& n = cfg.nodes[i];
    out += "CREATE (n" + std::to_string(i) + ":" + cypher_label(n.kind) +
           " {subgraph: " + std::to_string(n.subgraph);
    if (n.line > 0) out += ", line: " + std::to_string(n.line);
    if (n.stmt.valid()) out += ", stmt: '" + to_string(n.stmt) + "'";
    out += "})\n";
  }
  for (const CfgEdge& e : cfg.edges) {
    out += "CREATE (n" + std::to_string(e.source) + ")-[:" + cypher_rel(e.kind) +
           "]->(n" + std::to_string(e.target) + ")\n";
  }
  return out;
}

}  // namespace

std::string export_graph(const ControlFlowModel& cfg, GraphExportFormat format) {
  return format == GraphExportFormat::Dot ? export_dot(cfg) : export_cypher(cfg);
}

Json cfg_to_json(const ControlFlowModel& cfg) {
  Json j;
  j["formatVersion"] = 1;
  Json sgs = Json::array();
  for (const SubGraph& g : cfg.subgraphs) {
    Json sg;
    sg["kind"] = g.kind == SubGraphKind::CodeBlock ? "codeBlock" : "callable";
    sg["block"] = g.block.valid() ? Json(g.block.value) : Json(nullptr);
    sg["start"] = g.start;
    sg["end"] = g.end;
    sg["nodes"] = g.nodes;
    sgs.push_back(std::move(sg));
  }
  j["subgraphs"] = std::move(sgs);
  Json nodes = Json::array();
  for (const CfgNode& n : cfg.nodes) {
    Json node;
    node["kind"] = to_string(n.kind);
    node["subgraph"] = n.subgraph;
    node["stmtRef"] = n.stmt.valid() ? Json(n.stmt.value) : Json(nullptr);
    node["exprRef"] = n.expr.valid() ? Json(n.expr.value) : Json(nullptr);
    node["line"] = n.line;
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const CfgEdge& e : cfg.edges) {
    Json edge;
    edge["kind"] = to_string(e.kind);
    edge["source"] = e.source;
    edge["target"] = e.target;
    edge["exprRef"] = e.expr.valid() ? Json(e.expr.value) : Json(nullptr);
    edges.push_back(std::move(edge));
  }
  j["edges"] = std::move(edges);
  return j;
}

}  // namespace sx
