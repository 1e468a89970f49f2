#include "geogan/nn/autodiff.hpp"

#include <unordered_set>

namespace geogan::nn {

Tensor& Node::ensure_grad() {
  if (!grad.defined() || grad.size() != value.size()) {
    grad = Tensor(value.shape());
  }
  return grad;
}

Var Var::leaf(Tensor value, bool requires_grad) {
  Var v;
  v.node_ = std::make_shared<Node>();
  v.node_->value = std::move(value);
  v.node_->requires_grad = requires_grad;
  return v;
}

Var Var::make(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop) {
  bool needs = false;
  for (const Var& p : parents) {
    if (p.requires_grad()) {
      needs = true;
      break;
    }
  }
  if (!needs) return constant(std::move(value));
  Var v;
  v.node_ = std::make_shared<Node>();
  v.node_->value = std::move(value);
  v.node_->requires_grad = true;
  v.node_->parents = std::move(parents);
  v.node_->backprop = std::move(backprop);
  return v;
}

const Tensor& Var::grad() const {
  return node_->ensure_grad();
}

void accumulate(const Var& v, const Tensor& g) {
  if (!v.requires_grad()) return;
  v.node()->ensure_grad().add_inplace(g);
}

void Var::backward() {
  Node* root = node_.get();
  if (!root) throw InvalidArgument("backward on an undefined Var");
  if (root->value.size() != 1) {
    throw ShapeError("backward requires a scalar output, got " + root->value.shape_str());
  }

  // Iterative post-order DFS over parent edges; reversed it is a topological
  // order with every consumer ahead of its producers.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  visited.insert(root);
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx].node().get();
      ++idx;
      if (p && p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->ensure_grad()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop && n->grad.defined()) n->backprop(*n);
  }
}

}  // namespace geogan::nn
