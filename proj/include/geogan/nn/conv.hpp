#pragma once

#include "geogan/nn/tensor.hpp"

namespace geogan::nn {

enum class Pad { Same, Valid };

/// Geometry of one 2-D convolution. Same-padding follows the ceil(in/stride)
/// output-size convention with the extra pad row/column on the bottom/right.
struct ConvGeom {
  long in_h = 0, in_w = 0;
  long k = 0, stride = 1;
  long pad_top = 0, pad_left = 0;
  long out_h = 0, out_w = 0;
};

ConvGeom conv_geom(long in_h, long in_w, long k, long stride, Pad pad);

/// x: (N,H,W,Ci), w: (k,k,Ci,Co) -> (N,OH,OW,Co). No bias.
Tensor conv_fwd(const Tensor& x, const Tensor& w, const ConvGeom& g);

/// gy: (N,OH,OW,Co), w: (k,k,Ci,Co) -> (N,H,W,Ci). Adjoint of conv_fwd in x.
Tensor conv_bwd_input(const Tensor& gy, const Tensor& w, const ConvGeom& g);

/// x: (N,H,W,Ci), gy: (N,OH,OW,Co) -> (k,k,Ci,Co). Adjoint of conv_fwd in w.
Tensor conv_bwd_weight(const Tensor& x, const Tensor& gy, const ConvGeom& g);

}  // namespace geogan::nn
