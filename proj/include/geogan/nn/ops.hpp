#pragma once

#include <string>
#include <vector>

#include "geogan/nn/autodiff.hpp"
#include "geogan/nn/conv.hpp"
#include "geogan/nn/tensor.hpp"

namespace geogan::nn {

// Elementwise (same shape unless noted).
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var neg(const Var& x);
Var scale(const Var& x, double s);
Var add_scalar(const Var& x, double s);
Var exp_(const Var& x);
Var log_(const Var& x);
Var tanh_(const Var& x);
Var sigmoid_(const Var& x);
Var sqrt_(const Var& x);   // gradient defined as 0 at x = 0
Var abs_(const Var& x);    // subgradient 0 at x = 0
Var pow_scalar(const Var& x, double p);
Var leaky_relu(const Var& x, double slope);
Var clamp(const Var& x, double lo, double hi);
Var stop_grad(const Var& x);

// Shape.
Var reshape(const Var& x, std::vector<long> shape);
Var concat(const std::vector<Var>& xs, int axis);

// Linear algebra.
Var matmul(const Var& a, const Var& b);                      // (M,K)x(K,N)
Var linear(const Var& x, const Var& w, const Var& b);        // (N,I)x(I,O)+O; b may be undefined

// Convolutions. x is NHWC; conv kernels (k,k,ci,co); transposed kernels
// (k,k,co,ci). Bias may be an undefined Var. `name` labels shape errors.
Var conv2d(const Var& x, const Var& w, const Var& b, long stride, Pad pad,
           const std::string& name = "conv2d");
Var conv2d_transpose(const Var& x, const Var& w, const Var& b, long stride, Pad pad,
                     long out_h, long out_w, const std::string& name = "conv2d_transpose");

// Broadcast / reduce.
Var broadcast_channel(const Var& v, long n, long h, long w);  // (C) -> (N,H,W,C)
Var channel_mean(const Var& x);                               // (N,H,W,C) -> (C)
Var reduce_sum_all(const Var& x);                             // scalar
Var reduce_mean_all(const Var& x);                            // scalar
Var reduce_nonbatch_sum(const Var& x);                        // (N,...) -> (N)

/// Elementwise product with a constant mask. The mask either matches x's
/// shape or its per-sample shape (x's shape without the leading batch dim).
Var mask_mul(const Var& x, const Tensor& mask);

/// Per-image Gram matrix of channel inner products: (N,H,W,C) -> (N,C,C).
Var gram_batch(const Var& x);

/// Batch normalization over (N,H,W) per channel. In training mode the batch
/// statistics normalize (differentiably) and update the running stats with
/// `momentum`; in inference mode the running stats are constants.
Var batch_norm(const Var& x, const Var& gamma, const Var& beta, Tensor& running_mean,
               Tensor& running_var, bool training, double momentum = 0.1, double eps = 1e-5);

}  // namespace geogan::nn
