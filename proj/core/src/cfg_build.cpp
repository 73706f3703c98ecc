#include <algorithm>
#include <functional>

#include "schemaxray/cfg.hpp"
#include "schemaxray/diagnostics.hpp"

namespace sx {

std::string to_string(CfgNodeKind k) {
  switch (k) {
    case CfgNodeKind::Start: return "start";
    case CfgNodeKind::End: return "end";
    case CfgNodeKind::Call: return "call";
    case CfgNodeKind::Selection: return "selection";
    case CfgNodeKind::Statement: return "statement";
  }
  return "statement";
}

std::string to_string(CfgEdgeKind k) {
  switch (k) {
    case CfgEdgeKind::Seq: return "seq";
    case CfgEdgeKind::Call: return "call";
    case CfgEdgeKind::CondTrue: return "condTrue";
    case CfgEdgeKind::CondFalse: return "condFalse";
  }
  return "seq";
}

int ControlFlowModel::node_count(int subgraph, CfgNodeKind kind) const {
  int count = 0;
  for (int n : subgraphs[static_cast<std::size_t>(subgraph)].nodes)
    if (nodes[static_cast<std::size_t>(n)].kind == kind) ++count;
  return count;
}

namespace {

// A dangling chain tail waiting to be connected to the next node.
struct Tail {
  int node;
  CfgEdgeKind kind;
  NodeId expr;  // condition expr for cond edges
};

class CfgBuilder {
 public:
  explicit CfgBuilder(const CodeModel& code) : code_(code) {}

  ControlFlowModel build() {
    std::function<void(const Container&)> visit = [&](const Container& c) {
      for (const auto& cc : c.code_containers)
        for (const auto& b : cc.blocks) build_subgraph(*b, SubGraphKind::CodeBlock);
      for (const auto& child : c.children) visit(child);
    };
    for (const auto& c : code_.containers) visit(c);
    return std::move(cfg_);
  }

 private:
  int add_node(CfgNodeKind kind, int subgraph, NodeId stmt = {}, NodeId expr = {},
               int line = 0) {
    CfgNode node;
    node.kind = kind;
    node.subgraph = subgraph;
    node.stmt = stmt;
    node.expr = expr;
    node.line = line;
    cfg_.nodes.push_back(std::move(node));
    int idx = static_cast<int>(cfg_.nodes.size()) - 1;
    cfg_.subgraphs[static_cast<std::size_t>(subgraph)].nodes.push_back(idx);
    return idx;
  }

  void add_edge(int source, int target, CfgEdgeKind kind, NodeId expr = {}) {
    CfgEdge edge;
    edge.kind = kind;
    edge.source = source;
    edge.target = target;
    edge.expr = expr;
    cfg_.edges.push_back(edge);
    int idx = static_cast<int>(cfg_.edges.size()) - 1;
    cfg_.nodes[static_cast<std::size_t>(source)].outgoing.push_back(idx);
    cfg_.nodes[static_cast<std::size_t>(target)].incoming.push_back(idx);
  }

  void connect(const std::vector<Tail>& tails, int node) {
    for (const Tail& t : tails) add_edge(t.node, node, t.kind, t.expr);
  }

  int build_subgraph(const CodeBlock& block, SubGraphKind kind) {
    SubGraph sg;
    sg.kind = kind;
    sg.block = block.id;
    cfg_.subgraphs.push_back(std::move(sg));
    int sg_index = static_cast<int>(cfg_.subgraphs.size()) - 1;

    int start = add_node(CfgNodeKind::Start, sg_index);
    cfg_.subgraphs[static_cast<std::size_t>(sg_index)].start = start;

    std::vector<Tail> tails{{start, CfgEdgeKind::Seq, {}}};
    tails = build_block(block, tails, sg_index);

    int end = add_node(CfgNodeKind::End, sg_index);
    cfg_.subgraphs[static_cast<std::size_t>(sg_index)].end = end;
    connect(tails, end);
    return sg_index;
  }

  std::vector<Tail> build_block(const CodeBlock& block, std::vector<Tail> tails,
                                int sg) {
    for (const auto& s : block.statements) tails = build_statement(*s, std::move(tails), sg);
    return tails;
  }

  std::vector<Tail> build_statement(const Statement& s, std::vector<Tail> tails,
                                    int sg) {
    if (s.kind == StmtKind::If) {
      if (!s.then_block) throw ModelError("if statement without a then-block");
      tails = build_calls_of_expr(s, s.cond.get(), std::move(tails), sg);
      int sel = add_node(CfgNodeKind::Selection, sg, s.id, s.cond->id, s.span.line);
      connect(tails, sel);
      build_orphan_lambdas_outside_call_args(*s.cond, sg);

      auto then_tails = build_block(*s.then_block,
                                    {{sel, CfgEdgeKind::CondTrue, s.cond->id}}, sg);
      if (s.else_block) {
        auto else_tails = build_block(*s.else_block,
                                      {{sel, CfgEdgeKind::CondFalse, s.cond->id}}, sg);
        then_tails.insert(then_tails.end(), else_tails.begin(), else_tails.end());
        return then_tails;
      }
      then_tails.push_back({sel, CfgEdgeKind::CondFalse, s.cond->id});
      return then_tails;
    }

    if (s.kind == StmtKind::While) {
      if (!s.then_block) throw ModelError("while statement without a body");
      tails = build_calls_of_expr(s, s.cond.get(), std::move(tails), sg);
      int sel = add_node(CfgNodeKind::Selection, sg, s.id, s.cond->id, s.span.line);
      connect(tails, sel);
      build_orphan_lambdas_outside_call_args(*s.cond, sg);

      auto body_tails = build_block(*s.then_block,
                                    {{sel, CfgEdgeKind::CondTrue, s.cond->id}}, sg);
      for (const Tail& t : body_tails) add_edge(t.node, sel, CfgEdgeKind::Seq);
      return {{sel, CfgEdgeKind::CondFalse, s.cond->id}};
    }

    // Plain statement: one call node per invocation in evaluation order, or
    // a single statement node when no invocation occurs.
    std::vector<const Expr*> calls;
    std::vector<const Expr*> roots;
    if (s.expr) roots.push_back(s.expr.get());
    if (s.target) roots.push_back(s.target.get());
    if (s.value) roots.push_back(s.value.get());
    for (const Expr* root : roots) collect_calls(*root, calls);

    if (calls.empty()) {
      int n = add_node(CfgNodeKind::Statement, sg, s.id, {}, s.span.line);
      connect(tails, n);
      tails = {{n, CfgEdgeKind::Seq, {}}};
    } else {
      for (const Expr* root : roots)
        tails = build_calls_of_expr(s, root, std::move(tails), sg);
    }

    for (const Expr* root : roots) build_orphan_lambdas_outside_call_args(*root, sg);
    return tails;
  }

  // Call expressions in evaluation order: receiver chain first, then
  // arguments, then the invocation itself. Lambda bodies are not descended
  // into; they form their own subgraphs.
  static void collect_calls(const Expr& e, std::vector<const Expr*>& out) {
    switch (e.kind) {
      case ExprKind::Call:
        if (e.object) collect_calls(*e.object, out);
        for (const auto& a : e.args)
          if (a->kind != ExprKind::Lambda) collect_calls(*a, out);
        out.push_back(&e);
        return;
      case ExprKind::Lambda:
        return;
      case ExprKind::PropertyAccess:
        if (e.object) collect_calls(*e.object, out);
        return;
      case ExprKind::IndexAccess:
        if (e.object) collect_calls(*e.object, out);
        if (e.index) collect_calls(*e.index, out);
        return;
      case ExprKind::Binary:
        collect_calls(*e.lhs, out);
        collect_calls(*e.rhs, out);
        return;
      case ExprKind::New:
      case ExprKind::ArrayLiteral:
        for (const auto& a : e.args) collect_calls(*a, out);
        return;
      case ExprKind::ObjectLiteral:
        for (const auto& [k, v] : e.pairs) collect_calls(*v, out);
        return;
      default:
        return;
    }
  }

  // Lambdas that are not direct call arguments (declaration initializers,
  // object values) still own a subgraph, without an incoming call edge.
  void build_orphan_lambdas_outside_call_args(const Expr& e, int sg) {
    switch (e.kind) {
      case ExprKind::Lambda:
        build_subgraph(*e.body, SubGraphKind::Callable);
        return;
      case ExprKind::Call:
        if (e.object) build_orphan_lambdas_outside_call_args(*e.object, sg);
        for (const auto& a : e.args)
          if (a->kind != ExprKind::Lambda)  // handled with a call edge already
            build_orphan_lambdas_outside_call_args(*a, sg);
        return;
      case ExprKind::PropertyAccess:
        if (e.object) build_orphan_lambdas_outside_call_args(*e.object, sg);
        return;
      case ExprKind::IndexAccess:
        if (e.object) build_orphan_lambdas_outside_call_args(*e.object, sg);
        if (e.index) build_orphan_lambdas_outside_call_args(*e.index, sg);
        return;
      case ExprKind::Binary:
        build_orphan_lambdas_outside_call_args(*e.lhs, sg);
        build_orphan_lambdas_outside_call_args(*e.rhs, sg);
        return;
      case ExprKind::New:
      case ExprKind::ArrayLiteral:
        for (const auto& a : e.args) build_orphan_lambdas_outside_call_args(*a, sg);
        return;
      case ExprKind::ObjectLiteral:
        for (const auto& [k, v] : e.pairs) build_orphan_lambdas_outside_call_args(*v, sg);
        return;
      default:
        return;
    }
  }

  std::vector<Tail> build_calls_of_expr(const Statement& s, const Expr* expr,
                                         std::vector<Tail> tails, int sg) {
    if (!expr) return tails;
    std::vector<const Expr*> calls;
    collect_calls(*expr, calls);
    for (const Expr* call : calls) {
      int n = add_node(CfgNodeKind::Call, sg, s.id, call->id, s.span.line);
      connect(tails, n);
      tails = {{n, CfgEdgeKind::Seq, {}}};
      for (const auto& arg : call->args) {
        if (arg->kind == ExprKind::Lambda) {
          int lambda_sg = build_subgraph(*arg->body, SubGraphKind::Callable);
          add_edge(n, cfg_.subgraphs[static_cast<std::size_t>(lambda_sg)].start,
                   CfgEdgeKind::Call, call->id);
        }
      }
    }
    return tails;
  }

  const CodeModel& code_;
  ControlFlowModel cfg_;
};

}  // namespace

ControlFlowModel build_cfg(const CodeModel& code) {
  CfgBuilder builder(code);
  return builder.build();
}

std::vector<int> forward_reachable(const ControlFlowModel& cfg, int from) {
  std::vector<bool> seen(cfg.nodes.size(), false);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  std::vector<int> out;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int e : cfg.nodes[static_cast<std::size_t>(n)].outgoing) {
      int t = cfg.edges[static_cast<std::size_t>(e)].target;
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        out.push_back(t);
        stack.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> backward_reachable(const ControlFlowModel& cfg, int from) {
  std::vector<bool> seen(cfg.nodes.size(), false);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  std::vector<int> out;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int e : cfg.nodes[static_cast<std::size_t>(n)].incoming) {
      int s = cfg.edges[static_cast<std::size_t>(e)].source;
      if (!seen[static_cast<std::size_t>(s)]) {
        seen[static_cast<std::size_t>(s)] = true;
        out.push_back(s);
        stack.push_back(s);
      }
    }
  }
  std::sort(out.begin(), out.end(), std::greater<int>());
  return out;
}

}  // namespace sx
