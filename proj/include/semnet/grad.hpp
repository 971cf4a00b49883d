#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Minimal reverse-mode differentiation over scalar computation graphs.
// Supports +, -, *, exp, n-ary max/min, and a temperature-scaled softmax
// component; enough to differentiate the auction training objective.
//
// Nodes live in an append-only arena, so children always precede parents and
// the graph is acyclic by construction; forward() re-checks the ordering and
// reports an invalid graph if it is ever violated. A tape is single-threaded
// during forward/backward; distinct tapes are independent.

namespace semnet::grad {

class Tape {
 public:
  using NodeId = std::uint32_t;

  NodeId constant(double value);
  NodeId parameter(double value);
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId exp(NodeId a);
  NodeId max(std::span<const NodeId> args);
  NodeId min(std::span<const NodeId> args);

  /// softmax(temperature * logits)[index]. Gradients flow to every logit.
  NodeId softmax_component(std::span<const NodeId> logits, std::size_t index,
                           double temperature);

  /// Evaluates every node up to `root` in topological (arena) order and
  /// returns the root value.
  double forward(NodeId root);

  /// Accumulates d(root)/d(node) for every node at or below `root`. Requires
  /// a prior forward() covering `root`. Max/min route the full gradient to
  /// the lowest-index attaining argument.
  void backward(NodeId root);

  /// Rebinds a parameter's value; invalidates previous forward results.
  void set_parameter(NodeId id, double value);

  double value(NodeId id) const;
  double gradient(NodeId id) const;

  std::size_t size() const { return nodes_.size(); }

  /// Number of nodes processed by the most recent backward pass (each node
  /// is visited exactly once).
  std::size_t last_backward_visits() const { return last_backward_visits_; }

  /// Smallest gap between the attaining argument of any max/min at or below
  /// `root` and its runner-up (infinity when there is none). Requires a
  /// prior forward(). Finite-difference checks are only meaningful when this
  /// margin comfortably exceeds the step size.
  double min_kink_margin(NodeId root) const;

 private:
  enum class Op : std::uint8_t {
    kConstant,
    kParameter,
    kAdd,
    kMul,
    kExp,
    kMax,
    kMin,
    kSoftmax,
  };

  struct Node {
    Op op;
    std::int32_t select = -1;  // attaining child (max/min) or component (softmax)
    double value = 0.0;
    double grad = 0.0;
    double temperature = 1.0;  // softmax only
    std::uint32_t child_begin = 0;
    std::uint32_t child_count = 0;
  };

  NodeId push(Op op, std::span<const NodeId> children);
  void eval(NodeId id);

  std::vector<Node> nodes_;
  std::vector<NodeId> children_;
  std::size_t forward_extent_ = 0;  // nodes covered by the last forward pass
  std::size_t last_backward_visits_ = 0;
};

/// Max over `params` of |analytic - central difference| / (|analytic| + 1e-12)
/// for the expression rooted at `root`, using central differences with step h.
/// Parameter values are restored afterwards.
double check_gradients(Tape& tape, Tape::NodeId root,
                       std::span<const Tape::NodeId> params, double h);

}  // namespace semnet::grad
