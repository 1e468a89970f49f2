#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "geogan/nn/tensor.hpp"

namespace geogan::nn {

class Var;

/// One node of the dynamically built computation graph.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<Var> parents;
  std::function<void(Node&)> backprop;  // reads this->grad, accumulates into parents

  Tensor& ensure_grad();
};

/// Shared handle to a graph node. Building ops on Vars records the tape;
/// Var::backward() runs reverse-mode accumulation into every reachable leaf
/// that requires gradients. Ops with no differentiable parents collapse to
/// constants so inference builds no tape.
class Var {
public:
  Var() = default;

  static Var leaf(Tensor value, bool requires_grad = false);
  static Var constant(Tensor value) { return leaf(std::move(value), false); }
  static Var make(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop);

  bool defined() const { return static_cast<bool>(node_); }
  const Tensor& value() const { return node_->value; }
  bool requires_grad() const { return node_ && node_->requires_grad; }

  /// Accumulated gradient; zero tensor if nothing flowed here.
  const Tensor& grad() const;

  /// Reverse-mode sweep from a scalar output.
  void backward();

  std::shared_ptr<Node> node() const { return node_; }

private:
  std::shared_ptr<Node> node_;
};

/// Adds g into v's gradient if v participates in differentiation.
void accumulate(const Var& v, const Tensor& g);

}  // namespace geogan::nn
