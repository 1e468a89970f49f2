#include "geogan/nn/ops.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstring>

namespace geogan::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<RowMat>;
using CMapRM = Eigen::Map<const RowMat>;

void check_same_shape(const Var& a, const Var& b, const char* op) {
  if (!a.value().same_shape(b.value())) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.value().shape_str() + " vs " +
                     b.value().shape_str());
  }
}

template <typename Fwd, typename Bwd>
Var unary_op(const Var& x, Fwd f, Bwd dfdx_times_g) {
  const Tensor& xv = x.value();
  Tensor y(xv.shape());
  for (long i = 0; i < xv.size(); ++i) y[i] = f(xv[i]);
  Tensor yv = y;  // captured copy for backward closures that need the output
  return Var::make(std::move(y), {x}, [x, yv = std::move(yv), dfdx_times_g](Node& self) {
    const Tensor& xv2 = x.value();
    Tensor gx(xv2.shape());
    for (long i = 0; i < xv2.size(); ++i) gx[i] = dfdx_times_g(xv2[i], yv[i], self.grad[i]);
    accumulate(x, gx);
  });
}

}  // namespace

Var add(const Var& a, const Var& b) {
  check_same_shape(a, b, "add");
  Tensor y = a.value();
  y.add_inplace(b.value());
  return Var::make(std::move(y), {a, b}, [a, b](Node& self) {
    accumulate(a, self.grad);
    accumulate(b, self.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  check_same_shape(a, b, "sub");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor y(av.shape());
  for (long i = 0; i < av.size(); ++i) y[i] = av[i] - bv[i];
  return Var::make(std::move(y), {a, b}, [a, b](Node& self) {
    accumulate(a, self.grad);
    if (b.requires_grad()) {
      Tensor gb = self.grad;
      gb.scale_inplace(-1.0);
      accumulate(b, gb);
    }
  });
}

Var mul(const Var& a, const Var& b) {
  check_same_shape(a, b, "mul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor y(av.shape());
  for (long i = 0; i < av.size(); ++i) y[i] = av[i] * bv[i];
  return Var::make(std::move(y), {a, b}, [a, b](Node& self) {
    if (a.requires_grad()) {
      Tensor ga(self.grad.shape());
      for (long i = 0; i < ga.size(); ++i) ga[i] = self.grad[i] * b.value()[i];
      accumulate(a, ga);
    }
    if (b.requires_grad()) {
      Tensor gb(self.grad.shape());
      for (long i = 0; i < gb.size(); ++i) gb[i] = self.grad[i] * a.value()[i];
      accumulate(b, gb);
    }
  });
}

Var neg(const Var& x) { return scale(x, -1.0); }

Var scale(const Var& x, double s) {
  return unary_op(
      x, [s](double v) { return s * v; },
      [s](double, double, double g) { return s * g; });
}

Var add_scalar(const Var& x, double s) {
  return unary_op(
      x, [s](double v) { return v + s; }, [](double, double, double g) { return g; });
}

Var exp_(const Var& x) {
  return unary_op(
      x, [](double v) { return std::exp(v); },
      [](double, double y, double g) { return g * y; });
}

Var log_(const Var& x) {
  return unary_op(
      x, [](double v) { return std::log(v); },
      [](double v, double, double g) { return g / v; });
}

Var tanh_(const Var& x) {
  return unary_op(
      x, [](double v) { return std::tanh(v); },
      [](double, double y, double g) { return g * (1.0 - y * y); });
}

Var sigmoid_(const Var& x) {
  return unary_op(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y, double g) { return g * y * (1.0 - y); });
}

Var sqrt_(const Var& x) {
  return unary_op(
      x, [](double v) { return std::sqrt(v); },
      [](double, double y, double g) { return y > 0 ? g * 0.5 / y : 0.0; });
}

Var abs_(const Var& x) {
  return unary_op(
      x, [](double v) { return std::abs(v); },
      [](double v, double, double g) { return v > 0 ? g : (v < 0 ? -g : 0.0); });
}

Var pow_scalar(const Var& x, double p) {
  return unary_op(
      x, [p](double v) { return std::pow(v, p); },
      [p](double v, double, double g) { return g * p * std::pow(v, p - 1.0); });
}

Var leaky_relu(const Var& x, double slope) {
  return unary_op(
      x, [slope](double v) { return v >= 0 ? v : slope * v; },
      [slope](double v, double, double g) { return v >= 0 ? g : slope * g; });
}

Var clamp(const Var& x, double lo, double hi) {
  return unary_op(
      x, [lo, hi](double v) { return v < lo ? lo : (v > hi ? hi : v); },
      [lo, hi](double v, double, double g) { return (v > lo && v < hi) ? g : 0.0; });
}

Var stop_grad(const Var& x) { return Var::constant(x.value()); }

Var reshape(const Var& x, std::vector<long> shape) {
  if (Tensor::count(shape) != x.value().size()) {
    throw ShapeError("reshape: size mismatch " + x.value().shape_str() + " -> " +
                     Tensor::shape_str(shape));
  }
  Tensor y = x.value();
  Tensor reshaped = Tensor::from(std::move(shape), std::vector<double>(y.data(), y.data() + y.size()));
  return Var::make(std::move(reshaped), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g = Tensor::from(x.value().shape(),
                            std::vector<double>(self.grad.data(), self.grad.data() + self.grad.size()));
    accumulate(x, g);
  });
}

Var concat(const std::vector<Var>& xs, int axis) {
  if (xs.empty()) throw InvalidArgument("concat: empty input list");
  const int rank = xs[0].value().rank();
  if (axis < 0 || axis >= rank) throw ShapeError("concat: bad axis");
  std::vector<long> out_shape = xs[0].value().shape();
  long axis_total = 0;
  for (const Var& v : xs) {
    const auto& s = v.value().shape();
    if (static_cast<int>(s.size()) != rank) throw ShapeError("concat: rank mismatch");
    for (int d = 0; d < rank; ++d) {
      if (d != axis && s[static_cast<std::size_t>(d)] != out_shape[static_cast<std::size_t>(d)]) {
        throw ShapeError("concat: shape mismatch on non-concat axis");
      }
    }
    axis_total += s[static_cast<std::size_t>(axis)];
  }
  out_shape[static_cast<std::size_t>(axis)] = axis_total;

  long outer = 1, inner = 1;
  for (int d = 0; d < axis; ++d) outer *= out_shape[static_cast<std::size_t>(d)];
  for (int d = axis + 1; d < rank; ++d) inner *= out_shape[static_cast<std::size_t>(d)];

  Tensor y(out_shape);
  const long out_width = axis_total * inner;
  long off = 0;
  for (const Var& v : xs) {
    const long w = v.value().dim(axis) * inner;
    for (long o = 0; o < outer; ++o) {
      std::memcpy(y.data() + o * out_width + off, v.value().data() + o * w,
                  static_cast<std::size_t>(w) * sizeof(double));
    }
    off += w;
  }

  return Var::make(std::move(y), xs, [xs, axis, outer, inner, out_width](Node& self) {
    long off2 = 0;
    for (const Var& v : xs) {
      const long w = v.value().dim(axis) * inner;
      if (v.requires_grad()) {
        Tensor g(v.value().shape());
        for (long o = 0; o < outer; ++o) {
          std::memcpy(g.data() + o * w, self.grad.data() + o * out_width + off2,
                      static_cast<std::size_t>(w) * sizeof(double));
        }
        accumulate(v, g);
      }
      off2 += w;
    }
  });
}

Var matmul(const Var& a, const Var& b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() != 2 || av.dim(1) != bv.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " + av.shape_str() + " x " + bv.shape_str());
  }
  const long m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  Tensor y({m, n});
  MapRM(y.data(), m, n).noalias() = CMapRM(av.data(), m, k) * CMapRM(bv.data(), k, n);
  return Var::make(std::move(y), {a, b}, [a, b, m, k, n](Node& self) {
    CMapRM g(self.grad.data(), m, n);
    if (a.requires_grad()) {
      Tensor ga({m, k});
      MapRM(ga.data(), m, k).noalias() = g * CMapRM(b.value().data(), k, n).transpose();
      accumulate(a, ga);
    }
    if (b.requires_grad()) {
      Tensor gb({k, n});
      MapRM(gb.data(), k, n).noalias() = CMapRM(a.value().data(), m, k).transpose() * g;
      accumulate(b, gb);
    }
  });
}

Var linear(const Var& x, const Var& w, const Var& b) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  if (xv.rank() != 2 || wv.rank() != 2 || xv.dim(1) != wv.dim(0)) {
    throw ShapeError("linear: incompatible shapes " + xv.shape_str() + " x " + wv.shape_str());
  }
  const long n = xv.dim(0), in = xv.dim(1), out = wv.dim(1);
  Tensor y({n, out});
  MapRM ym(y.data(), n, out);
  ym.noalias() = CMapRM(xv.data(), n, in) * CMapRM(wv.data(), in, out);
  if (b.defined()) {
    if (b.value().size() != out) throw ShapeError("linear: bias size mismatch");
    for (long r = 0; r < n; ++r) {
      for (long c = 0; c < out; ++c) y[r * out + c] += b.value()[c];
    }
  }
  std::vector<Var> parents = {x, w};
  if (b.defined()) parents.push_back(b);
  return Var::make(std::move(y), std::move(parents), [x, w, b, n, in, out](Node& self) {
    CMapRM g(self.grad.data(), n, out);
    if (x.requires_grad()) {
      Tensor gx({n, in});
      MapRM(gx.data(), n, in).noalias() = g * CMapRM(w.value().data(), in, out).transpose();
      accumulate(x, gx);
    }
    if (w.requires_grad()) {
      Tensor gw({in, out});
      MapRM(gw.data(), in, out).noalias() = CMapRM(x.value().data(), n, in).transpose() * g;
      accumulate(w, gw);
    }
    if (b.defined() && b.requires_grad()) {
      Tensor gb({out});
      for (long r = 0; r < n; ++r) {
        for (long c = 0; c < out; ++c) gb[c] += self.grad[r * out + c];
      }
      accumulate(b, gb);
    }
  });
}

namespace {

Tensor channel_sum_tensor(const Tensor& t) {
  const long c = t.dim(t.rank() - 1);
  Tensor out({c});
  const long rows = t.size() / c;
  for (long r = 0; r < rows; ++r) {
    const double* p = t.data() + r * c;
    for (long i = 0; i < c; ++i) out[i] += p[i];
  }
  return out;
}

void add_bias_channels(Tensor& t, const Tensor& b) {
  const long c = t.dim(t.rank() - 1);
  if (b.size() != c) throw ShapeError("bias size mismatch");
  const long rows = t.size() / c;
  for (long r = 0; r < rows; ++r) {
    double* p = t.data() + r * c;
    for (long i = 0; i < c; ++i) p[i] += b[i];
  }
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, long stride, Pad pad,
           const std::string& name) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  if (xv.rank() != 4) throw ShapeError(name + ": input must be NHWC, got " + xv.shape_str());
  if (wv.rank() != 4 || wv.dim(0) != wv.dim(1)) {
    throw ShapeError(name + ": kernel must be (k,k,ci,co), got " + wv.shape_str());
  }
  if (wv.dim(2) != xv.dim(3)) {
    throw ShapeError(name + ": input has " + std::to_string(xv.dim(3)) + " channels, kernel expects " +
                     std::to_string(wv.dim(2)));
  }
  ConvGeom g;
  try {
    g = conv_geom(xv.dim(1), xv.dim(2), wv.dim(0), stride, pad);
  } catch (const ShapeError& e) {
    throw ShapeError(name + ": " + e.what());
  }
  Tensor y = conv_fwd(xv, wv, g);
  if (b.defined()) add_bias_channels(y, b.value());
  std::vector<Var> parents = {x, w};
  if (b.defined()) parents.push_back(b);
  return Var::make(std::move(y), std::move(parents), [x, w, b, g](Node& self) {
    if (x.requires_grad()) accumulate(x, conv_bwd_input(self.grad, w.value(), g));
    if (w.requires_grad()) accumulate(w, conv_bwd_weight(x.value(), self.grad, g));
    if (b.defined() && b.requires_grad()) accumulate(b, channel_sum_tensor(self.grad));
  });
}

Var conv2d_transpose(const Var& x, const Var& w, const Var& b, long stride, Pad pad,
                     long out_h, long out_w, const std::string& name) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  if (xv.rank() != 4) throw ShapeError(name + ": input must be NHWC, got " + xv.shape_str());
  if (wv.rank() != 4 || wv.dim(0) != wv.dim(1)) {
    throw ShapeError(name + ": kernel must be (k,k,co,ci), got " + wv.shape_str());
  }
  if (wv.dim(3) != xv.dim(3)) {
    throw ShapeError(name + ": input has " + std::to_string(xv.dim(3)) + " channels, kernel expects " +
                     std::to_string(wv.dim(3)));
  }
  ConvGeom g;
  try {
    g = conv_geom(out_h, out_w, wv.dim(0), stride, pad);
  } catch (const ShapeError& e) {
    throw ShapeError(name + ": " + e.what());
  }
  if (g.out_h != xv.dim(1) || g.out_w != xv.dim(2)) {
    throw ShapeError(name + ": target " + std::to_string(out_h) + "x" + std::to_string(out_w) +
                     " is inconsistent with input " + xv.shape_str());
  }
  Tensor y = conv_bwd_input(xv, wv, g);
  if (b.defined()) add_bias_channels(y, b.value());
  std::vector<Var> parents = {x, w};
  if (b.defined()) parents.push_back(b);
  return Var::make(std::move(y), std::move(parents), [x, w, b, g](Node& self) {
    if (x.requires_grad()) accumulate(x, conv_fwd(self.grad, w.value(), g));
    if (w.requires_grad()) accumulate(w, conv_bwd_weight(self.grad, x.value(), g));
    if (b.defined() && b.requires_grad()) accumulate(b, channel_sum_tensor(self.grad));
  });
}

Var broadcast_channel(const Var& v, long n, long h, long w) {
  const Tensor& vv = v.value();
  if (vv.rank() != 1) throw ShapeError("broadcast_channel: expected rank-1, got " + vv.shape_str());
  const long c = vv.dim(0);
  Tensor y({n, h, w, c});
  const long rows = n * h * w;
  for (long r = 0; r < rows; ++r) {
    std::memcpy(y.data() + r * c, vv.data(), static_cast<std::size_t>(c) * sizeof(double));
  }
  return Var::make(std::move(y), {v}, [v](Node& self) {
    if (v.requires_grad()) accumulate(v, channel_sum_tensor(self.grad));
  });
}

Var channel_mean(const Var& x) {
  const Tensor& xv = x.value();
  if (xv.rank() != 4) throw ShapeError("channel_mean: expected NHWC, got " + xv.shape_str());
  const long c = xv.dim(3);
  const long rows = xv.size() / c;
  Tensor y = channel_sum_tensor(xv);
  y.scale_inplace(1.0 / static_cast<double>(rows));
  return Var::make(std::move(y), {x}, [x, rows, c](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape());
    const double inv = 1.0 / static_cast<double>(rows);
    for (long r = 0; r < rows; ++r) {
      double* p = g.data() + r * c;
      for (long i = 0; i < c; ++i) p[i] = self.grad[i] * inv;
    }
    accumulate(x, g);
  });
}

Var reduce_sum_all(const Var& x) {
  double s = 0;
  for (long i = 0; i < x.value().size(); ++i) s += x.value()[i];
  return Var::make(Tensor::scalar(s), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape(), self.grad[0]);
    accumulate(x, g);
  });
}

Var reduce_mean_all(const Var& x) {
  const long n = x.value().size();
  if (n == 0) throw InvalidArgument("reduce_mean_all: empty tensor");
  double s = 0;
  for (long i = 0; i < n; ++i) s += x.value()[i];
  return Var::make(Tensor::scalar(s / static_cast<double>(n)), {x}, [x, n](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape(), self.grad[0] / static_cast<double>(n));
    accumulate(x, g);
  });
}

Var reduce_nonbatch_sum(const Var& x) {
  const Tensor& xv = x.value();
  if (xv.rank() < 1) throw ShapeError("reduce_nonbatch_sum: rank-0 input");
  const long n = xv.dim(0);
  const long per = xv.size() / std::max(n, 1L);
  Tensor y({n});
  for (long b = 0; b < n; ++b) {
    double s = 0;
    const double* p = xv.data() + b * per;
    for (long i = 0; i < per; ++i) s += p[i];
    y[b] = s;
  }
  return Var::make(std::move(y), {x}, [x, n, per](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape());
    for (long b = 0; b < n; ++b) {
      double* p = g.data() + b * per;
      for (long i = 0; i < per; ++i) p[i] = self.grad[b];
    }
    accumulate(x, g);
  });
}

Var mask_mul(const Var& x, const Tensor& mask) {
  const Tensor& xv = x.value();
  const long n = xv.rank() > 0 ? xv.dim(0) : 1;
  const bool per_sample = mask.size() * n == xv.size();
  if (!per_sample && mask.size() != xv.size()) {
    throw ShapeError("mask_mul: mask " + mask.shape_str() + " incompatible with " + xv.shape_str());
  }
  const long per = per_sample ? mask.size() : xv.size();
  const long reps = xv.size() / per;
  Tensor y(xv.shape());
  for (long r = 0; r < reps; ++r) {
    const double* src = xv.data() + r * per;
    double* dst = y.data() + r * per;
    for (long i = 0; i < per; ++i) dst[i] = src[i] * mask[i];
  }
  return Var::make(std::move(y), {x}, [x, mask, per, reps](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape());
    for (long r = 0; r < reps; ++r) {
      const double* src = self.grad.data() + r * per;
      double* dst = g.data() + r * per;
      for (long i = 0; i < per; ++i) dst[i] = src[i] * mask[i];
    }
    accumulate(x, g);
  });
}

Var gram_batch(const Var& x) {
  const Tensor& xv = x.value();
  if (xv.rank() != 4) throw ShapeError("gram_batch: expected NHWC, got " + xv.shape_str());
  const long n = xv.dim(0), m = xv.dim(1) * xv.dim(2), c = xv.dim(3);
  Tensor y({n, c, c});
  for (long b = 0; b < n; ++b) {
    CMapRM p(xv.data() + b * m * c, m, c);
    MapRM(y.data() + b * c * c, c, c).noalias() = p.transpose() * p;
  }
  return Var::make(std::move(y), {x}, [x, n, m, c](Node& self) {
    if (!x.requires_grad()) return;
    Tensor g(x.value().shape());
    for (long b = 0; b < n; ++b) {
      CMapRM p(x.value().data() + b * m * c, m, c);
      CMapRM dg(self.grad.data() + b * c * c, c, c);
      MapRM(g.data() + b * m * c, m, c).noalias() = p * (dg + dg.transpose());
    }
    accumulate(x, g);
  });
}

Var batch_norm(const Var& x, const Var& gamma, const Var& beta, Tensor& running_mean,
               Tensor& running_var, bool training, double momentum, double eps) {
  const Tensor& xv = x.value();
  if (xv.rank() != 4) throw ShapeError("batch_norm: expected NHWC, got " + xv.shape_str());
  const long n = xv.dim(0), h = xv.dim(1), w = xv.dim(2), c = xv.dim(3);
  if (gamma.value().size() != c || beta.value().size() != c) {
    throw ShapeError("batch_norm: scale/shift size mismatch");
  }
  if (training) {
    Var mu = channel_mean(x);
    Var xc = sub(x, broadcast_channel(mu, n, h, w));
    Var var = channel_mean(mul(xc, xc));
    // Running stats are trainer state, not part of the differentiable graph.
    for (long i = 0; i < c; ++i) {
      running_mean[i] = (1.0 - momentum) * running_mean[i] + momentum * mu.value()[i];
      running_var[i] = (1.0 - momentum) * running_var[i] + momentum * var.value()[i];
    }
    Var inv = pow_scalar(add_scalar(var, eps), -0.5);
    Var xhat = mul(xc, broadcast_channel(inv, n, h, w));
    return add(mul(xhat, broadcast_channel(gamma, n, h, w)), broadcast_channel(beta, n, h, w));
  }
  Tensor inv_t({c});
  for (long i = 0; i < c; ++i) inv_t[i] = 1.0 / std::sqrt(running_var[i] + eps);
  Var xc = sub(x, broadcast_channel(Var::constant(running_mean), n, h, w));
  Var xhat = mul(xc, broadcast_channel(Var::constant(std::move(inv_t)), n, h, w));
  return add(mul(xhat, broadcast_channel(gamma, n, h, w)), broadcast_channel(beta, n, h, w));
}

}  // namespace geogan::nn
