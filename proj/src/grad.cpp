#include "semnet/grad.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace semnet::grad {

Tape::NodeId Tape::push(Op op, std::span<const NodeId> children) {
  const auto id = static_cast<NodeId>(nodes_.size());
  for (const NodeId c : children) {
    if (c >= id) {
      throw std::invalid_argument("invalid graph: child does not precede parent");
    }
  }
  Node n;
  n.op = op;
  n.child_begin = static_cast<std::uint32_t>(children_.size());
  n.child_count = static_cast<std::uint32_t>(children.size());
  children_.insert(children_.end(), children.begin(), children.end());
  nodes_.push_back(n);
  return id;
}

Tape::NodeId Tape::constant(double value) {
  const NodeId id = push(Op::kConstant, {});
  nodes_[id].value = value;
  return id;
}

Tape::NodeId Tape::parameter(double value) {
  const NodeId id = push(Op::kParameter, {});
  nodes_[id].value = value;
  return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  const NodeId ids[] = {a, b};
  return push(Op::kAdd, ids);
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  return add(a, mul(constant(-1.0), b));
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
  const NodeId ids[] = {a, b};
  return push(Op::kMul, ids);
}

Tape::NodeId Tape::exp(NodeId a) {
  const NodeId ids[] = {a};
  return push(Op::kExp, ids);
}

Tape::NodeId Tape::max(std::span<const NodeId> args) {
  if (args.empty()) throw std::invalid_argument("max of zero arguments");
  return push(Op::kMax, args);
}

Tape::NodeId Tape::min(std::span<const NodeId> args) {
  if (args.empty()) throw std::invalid_argument("min of zero arguments");
  return push(Op::kMin, args);
}

Tape::NodeId Tape::softmax_component(std::span<const NodeId> logits,
                                     std::size_t index, double temperature) {
  if (logits.empty()) throw std::invalid_argument("softmax of zero arguments");
  if (index >= logits.size()) throw std::invalid_argument("softmax index out of range");
  const NodeId id = push(Op::kSoftmax, logits);
  nodes_[id].select = static_cast<std::int32_t>(index);
  nodes_[id].temperature = temperature;
  return id;
}

void Tape::eval(NodeId id) {
  Node& n = nodes_[id];
  const NodeId* ch = children_.data() + n.child_begin;
  switch (n.op) {
    case Op::kConstant:
    case Op::kParameter:
      break;
    case Op::kAdd:
      n.value = nodes_[ch[0]].value + nodes_[ch[1]].value;
      break;
    case Op::kMul:
      n.value = nodes_[ch[0]].value * nodes_[ch[1]].value;
      break;
    case Op::kExp:
      n.value = std::exp(nodes_[ch[0]].value);
      break;
    case Op::kMax: {
      std::int32_t best = 0;
      double v = nodes_[ch[0]].value;
      for (std::uint32_t i = 1; i < n.child_count; ++i) {
        if (nodes_[ch[i]].value > v) {
          v = nodes_[ch[i]].value;
          best = static_cast<std::int32_t>(i);
        }
      }
      n.value = v;
      n.select = best;
      break;
    }
    case Op::kMin: {
      std::int32_t best = 0;
      double v = nodes_[ch[0]].value;
      for (std::uint32_t i = 1; i < n.child_count; ++i) {
        if (nodes_[ch[i]].value < v) {
          v = nodes_[ch[i]].value;
          best = static_cast<std::int32_t>(i);
        }
      }
      n.value = v;
      n.select = best;
      break;
    }
    case Op::kSoftmax: {
      double m = -std::numeric_limits<double>::infinity();
      for (std::uint32_t i = 0; i < n.child_count; ++i) {
        m = std::max(m, n.temperature * nodes_[ch[i]].value);
      }
      double z = 0.0;
      for (std::uint32_t i = 0; i < n.child_count; ++i) {
        z += std::exp(n.temperature * nodes_[ch[i]].value - m);
      }
      n.value = std::exp(n.temperature * nodes_[ch[static_cast<std::uint32_t>(
                             n.select)]].value - m) / z;
      break;
    }
  }
}

double Tape::forward(NodeId root) {
  if (root >= nodes_.size()) throw std::invalid_argument("unknown node");
  for (NodeId id = 0; id <= root; ++id) eval(id);
  forward_extent_ = static_cast<std::size_t>(root) + 1;
  return nodes_[root].value;
}

void Tape::backward(NodeId root) {
  if (root >= nodes_.size()) throw std::invalid_argument("unknown node");
  if (forward_extent_ <= root) {
    throw std::logic_error("backward before forward");
  }
  for (NodeId id = 0; id <= root; ++id) nodes_[id].grad = 0.0;
  nodes_[root].grad = 1.0;
  last_backward_visits_ = 0;
  for (NodeId id = root;; --id) {
    ++last_backward_visits_;
    const Node& n = nodes_[id];
    const double g = n.grad;
    const NodeId* ch = children_.data() + n.child_begin;
    if (g != 0.0) {
      switch (n.op) {
        case Op::kConstant:
        case Op::kParameter:
          break;
        case Op::kAdd:
          nodes_[ch[0]].grad += g;
          nodes_[ch[1]].grad += g;
          break;
        case Op::kMul:
          nodes_[ch[0]].grad += g * nodes_[ch[1]].value;
          nodes_[ch[1]].grad += g * nodes_[ch[0]].value;
          break;
        case Op::kExp:
          nodes_[ch[0]].grad += g * n.value;
          break;
        case Op::kMax:
        case Op::kMin:
          nodes_[ch[static_cast<std::uint32_t>(n.select)]].grad += g;
          break;
        case Op::kSoftmax: {
          // d s_i / d x_j = temp * s_i * (delta_ij - s_j)
          double m = -std::numeric_limits<double>::infinity();
          for (std::uint32_t i = 0; i < n.child_count; ++i) {
            m = std::max(m, n.temperature * nodes_[ch[i]].value);
          }
          double z = 0.0;
          for (std::uint32_t i = 0; i < n.child_count; ++i) {
            z += std::exp(n.temperature * nodes_[ch[i]].value - m);
          }
          const double si = n.value;
          for (std::uint32_t i = 0; i < n.child_count; ++i) {
            const double sj = std::exp(n.temperature * nodes_[ch[i]].value - m) / z;
            const double delta =
                static_cast<std::int32_t>(i) == n.select ? 1.0 : 0.0;
            nodes_[ch[i]].grad += g * n.temperature * si * (delta - sj);
          }
          break;
        }
      }
    }
    if (id == 0) break;
  }
}

double Tape::min_kink_margin(NodeId root) const {
  if (root >= nodes_.size()) throw std::invalid_argument("unknown node");
  if (forward_extent_ <= root) {
    throw std::logic_error("min_kink_margin before forward");
  }
  double margin = std::numeric_limits<double>::infinity();
  for (NodeId id = 0; id <= root; ++id) {
    const Node& n = nodes_[id];
    if ((n.op != Op::kMax && n.op != Op::kMin) || n.child_count < 2) continue;
    const NodeId* ch = children_.data() + n.child_begin;
    for (std::uint32_t i = 0; i < n.child_count; ++i) {
      if (static_cast<std::int32_t>(i) == n.select) continue;
      margin = std::min(margin, std::abs(n.value - nodes_[ch[i]].value));
    }
  }
  return margin;
}

void Tape::set_parameter(NodeId id, double value) {
  if (id >= nodes_.size()) throw std::invalid_argument("unknown node");
  if (nodes_[id].op != Op::kParameter) {
    throw std::invalid_argument("set_parameter on a non-parameter node");
  }
  nodes_[id].value = value;
  forward_extent_ = 0;
}

double Tape::value(NodeId id) const {
  if (id >= nodes_.size()) throw std::invalid_argument("unknown node");
  return nodes_[id].value;
}

double Tape::gradient(NodeId id) const {
  if (id >= nodes_.size()) throw std::invalid_argument("unknown node");
  return nodes_[id].grad;
}

double check_gradients(Tape& tape, Tape::NodeId root,
                       std::span<const Tape::NodeId> params, double h) {
  tape.forward(root);
  tape.backward(root);
  std::vector<double> analytic;
  analytic.reserve(params.size());
  for (const auto p : params) analytic.push_back(tape.gradient(p));

  double max_rel = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double v0 = tape.value(params[i]);
    tape.set_parameter(params[i], v0 + h);
    const double fp = tape.forward(root);
    tape.set_parameter(params[i], v0 - h);
    const double fm = tape.forward(root);
    tape.set_parameter(params[i], v0);
    const double central = (fp - fm) / (2.0 * h);
    const double rel =
        std::abs(analytic[i] - central) / (std::abs(analytic[i]) + 1e-12);
    max_rel = std::max(max_rel, rel);
  }
  tape.forward(root);
  return max_rel;
}

}  // namespace semnet::grad
