#include "geogan/models/mask.hpp"

#include "geogan/core/error.hpp"

namespace geogan::models {

nn::Tensor make_mask(MaskKind kind, Parity parity, long h, long w, long c) {
  if (h <= 0 || w <= 0 || c <= 0) throw InvalidArgument("make_mask: non-positive dimension");
  nn::Tensor m({h, w, c});
  if (kind == MaskKind::Checkerboard) {
    const long p = parity == Parity::Even ? 0 : 1;
    for (long i = 0; i < h; ++i) {
      for (long j = 0; j < w; ++j) {
        const double v = ((i + j + p) % 2 == 0) ? 1.0 : 0.0;
        for (long k = 0; k < c; ++k) m.at({i, j, k}) = v;
      }
    }
  } else {
    const long keep = (c + 1) / 2;
    for (long i = 0; i < h; ++i) {
      for (long j = 0; j < w; ++j) {
        for (long k = 0; k < c; ++k) {
          const bool first_half = k < keep;
          m.at({i, j, k}) = (first_half == (parity == Parity::Even)) ? 1.0 : 0.0;
        }
      }
    }
  }
  return m;
}

}  // namespace geogan::models
