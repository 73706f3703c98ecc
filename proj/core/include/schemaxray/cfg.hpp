#pragma once

#include <string>
#include <vector>

#include "schemaxray/code_json.hpp"
#include "schemaxray/code_model.hpp"

namespace sx {

enum class CfgNodeKind { Start, End, Call, Selection, Statement };
enum class CfgEdgeKind { Seq, Call, CondTrue, CondFalse };
enum class SubGraphKind { CodeBlock, Callable };

std::string to_string(CfgNodeKind k);
std::string to_string(CfgEdgeKind k);

struct CfgNode {
  CfgNodeKind kind = CfgNodeKind::Statement;
  int subgraph = -1;
  NodeId stmt;  // enclosing statement (call/selection/statement nodes)
  NodeId expr;  // invoked Call expr (call nodes) or condition (selection)
  int line = 0;
  std::vector<int> outgoing;  // edge indices
  std::vector<int> incoming;
};

struct CfgEdge {
  CfgEdgeKind kind = CfgEdgeKind::Seq;
  int source = -1;
  int target = -1;
  NodeId expr;  // the Call or condition expression, when applicable
};

struct SubGraph {
  SubGraphKind kind = SubGraphKind::CodeBlock;
  NodeId block;  // the CodeBlock this subgraph represents
  int start = -1;
  int end = -1;
  std::vector<int> nodes;  // in creation (execution) order
};

// Node and edge indices are global; node creation order equals the
// structural execution order (then-branch before else-branch, lambda bodies
// right after the invoking call node), which traversals rely on.
struct ControlFlowModel {
  std::vector<SubGraph> subgraphs;
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;

  int node_count(int subgraph, CfgNodeKind kind) const;
};

// Derives the Control Flow model. Throws ModelError on malformed input
// (e.g. an If statement without a then-block).
ControlFlowModel build_cfg(const CodeModel& code);

// All nodes reachable from `from` via outgoing edges, excluding `from`
// itself, ordered by creation index.
std::vector<int> forward_reachable(const ControlFlowModel& cfg, int from);

// All nodes reachable from `from` via incoming edges, excluding `from`,
// ordered by descending creation index (nearest first).
std::vector<int> backward_reachable(const ControlFlowModel& cfg, int from);

enum class GraphExportFormat { Dot, GraphCypher };

std::string export_graph(const ControlFlowModel& cfg, GraphExportFormat format);

Json cfg_to_json(const ControlFlowModel& cfg);

}  // namespace sx
