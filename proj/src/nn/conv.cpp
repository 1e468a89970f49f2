#include "geogan/nn/conv.hpp"

#include <Eigen/Core>

namespace geogan::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<RowMat, Eigen::Unaligned, Eigen::OuterStride<>>;
using CMapRM = Eigen::Map<const RowMat, Eigen::Unaligned, Eigen::OuterStride<>>;

// First output index whose tap lands inside the input.
long tap_lo(long pad, long kk, long stride) {
  const long d = pad - kk;
  return d <= 0 ? 0 : (d + stride - 1) / stride;
}

// Last output index whose tap lands inside the input, or -1.
long tap_hi(long in, long pad, long kk, long stride, long out) {
  const long d = in - 1 + pad - kk;
  if (d < 0) return -1;
  const long h = d / stride;
  return h < out - 1 ? h : out - 1;
}

}  // namespace

ConvGeom conv_geom(long in_h, long in_w, long k, long stride, Pad pad) {
  if (in_h <= 0 || in_w <= 0 || k <= 0 || stride <= 0) {
    throw ShapeError("conv_geom: non-positive dimension");
  }
  ConvGeom g;
  g.in_h = in_h;
  g.in_w = in_w;
  g.k = k;
  g.stride = stride;
  if (pad == Pad::Same) {
    g.out_h = (in_h + stride - 1) / stride;
    g.out_w = (in_w + stride - 1) / stride;
    const long pad_h = std::max((g.out_h - 1) * stride + k - in_h, 0L);
    const long pad_w = std::max((g.out_w - 1) * stride + k - in_w, 0L);
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
  } else {
    if (in_h < k || in_w < k) {
      throw ShapeError("conv_geom: valid convolution with kernel " + std::to_string(k) +
                       " larger than input " + std::to_string(in_h) + "x" + std::to_string(in_w));
    }
    g.out_h = (in_h - k) / stride + 1;
    g.out_w = (in_w - k) / stride + 1;
  }
  return g;
}

Tensor conv_fwd(const Tensor& x, const Tensor& w, const ConvGeom& g) {
  const long n = x.dim(0), ci = x.dim(3), co = w.dim(3);
  const long k = g.k, s = g.stride;
  Tensor y({n, g.out_h, g.out_w, co});

#pragma omp parallel for schedule(static)
  for (long img = 0; img < n; ++img) {
    const double* xp = x.data() + img * g.in_h * g.in_w * ci;
    double* yp = y.data() + img * g.out_h * g.out_w * co;
    for (long kh = 0; kh < k; ++kh) {
      const long rlo = tap_lo(g.pad_top, kh, s);
      const long rhi = tap_hi(g.in_h, g.pad_top, kh, s, g.out_h);
      if (rhi < rlo) continue;
      for (long kw = 0; kw < k; ++kw) {
        const long clo = tap_lo(g.pad_left, kw, s);
        const long chi = tap_hi(g.in_w, g.pad_left, kw, s, g.out_w);
        if (chi < clo) continue;
        const long ncols = chi - clo + 1;
        CMapRM wk(w.data() + (kh * k + kw) * ci * co, ci, co, Eigen::OuterStride<>(co));
        for (long r = rlo; r <= rhi; ++r) {
          const long in_r = r * s + kh - g.pad_top;
          const long in_c0 = clo * s + kw - g.pad_left;
          CMapRM src(xp + (in_r * g.in_w + in_c0) * ci, ncols, ci, Eigen::OuterStride<>(s * ci));
          MapRM dst(yp + (r * g.out_w + clo) * co, ncols, co, Eigen::OuterStride<>(co));
          dst.noalias() += src * wk;
        }
      }
    }
  }
  return y;
}

Tensor conv_bwd_input(const Tensor& gy, const Tensor& w, const ConvGeom& g) {
  const long n = gy.dim(0), co = gy.dim(3), ci = w.dim(2);
  const long k = g.k, s = g.stride;
  Tensor gx({n, g.in_h, g.in_w, ci});

#pragma omp parallel for schedule(static)
  for (long img = 0; img < n; ++img) {
    const double* gyp = gy.data() + img * g.out_h * g.out_w * co;
    double* gxp = gx.data() + img * g.in_h * g.in_w * ci;
    for (long kh = 0; kh < k; ++kh) {
      const long rlo = tap_lo(g.pad_top, kh, s);
      const long rhi = tap_hi(g.in_h, g.pad_top, kh, s, g.out_h);
      if (rhi < rlo) continue;
      for (long kw = 0; kw < k; ++kw) {
        const long clo = tap_lo(g.pad_left, kw, s);
        const long chi = tap_hi(g.in_w, g.pad_left, kw, s, g.out_w);
        if (chi < clo) continue;
        const long ncols = chi - clo + 1;
        CMapRM wk(w.data() + (kh * k + kw) * ci * co, ci, co, Eigen::OuterStride<>(co));
        for (long r = rlo; r <= rhi; ++r) {
          const long in_r = r * s + kh - g.pad_top;
          const long in_c0 = clo * s + kw - g.pad_left;
          CMapRM src(gyp + (r * g.out_w + clo) * co, ncols, co, Eigen::OuterStride<>(co));
          MapRM dst(gxp + (in_r * g.in_w + in_c0) * ci, ncols, ci, Eigen::OuterStride<>(s * ci));
          dst.noalias() += src * wk.transpose();
        }
      }
    }
  }
  return gx;
}

Tensor conv_bwd_weight(const Tensor& x, const Tensor& gy, const ConvGeom& g) {
  const long n = x.dim(0), ci = x.dim(3), co = gy.dim(3);
  const long k = g.k, s = g.stride;
  Tensor gw({k, k, ci, co});

  // Taps write disjoint kernel slices, so the parallel loop is bit-exact for
  // any thread count.
#pragma omp parallel for schedule(static)
  for (long tap = 0; tap < k * k; ++tap) {
    const long kh = tap / k, kw = tap % k;
    const long rlo = tap_lo(g.pad_top, kh, s);
    const long rhi = tap_hi(g.in_h, g.pad_top, kh, s, g.out_h);
    if (rhi < rlo) continue;
    const long clo = tap_lo(g.pad_left, kw, s);
    const long chi = tap_hi(g.in_w, g.pad_left, kw, s, g.out_w);
    if (chi < clo) continue;
    const long ncols = chi - clo + 1;
    MapRM dst(gw.data() + tap * ci * co, ci, co, Eigen::OuterStride<>(co));
    for (long img = 0; img < n; ++img) {
      const double* xp = x.data() + img * g.in_h * g.in_w * ci;
      const double* gyp = gy.data() + img * g.out_h * g.out_w * co;
      for (long r = rlo; r <= rhi; ++r) {
        const long in_r = r * s + kh - g.pad_top;
        const long in_c0 = clo * s + kw - g.pad_left;
        CMapRM src(xp + (in_r * g.in_w + in_c0) * ci, ncols, ci, Eigen::OuterStride<>(s * ci));
        CMapRM grow(gyp + (r * g.out_w + clo) * co, ncols, co, Eigen::OuterStride<>(co));
        dst.noalias() += src.transpose() * grow;
      }
    }
  }
  return gw;
}

}  // namespace geogan::nn
