#pragma once

#include "geogan/nn/tensor.hpp"

namespace geogan::models {

enum class MaskKind { Checkerboard, Channel };
enum class Parity { Even, Odd };

/// Binary coupling mask of shape (h, w, c). Checkerboard keeps pixels whose
/// (i + j) parity matches (Even keeps i + j even, so mask[0][0] = 1); the
/// channel kind keeps the first ceil(c/2) channels for Even. Opposite
/// parities are exact complements.
nn::Tensor make_mask(MaskKind kind, Parity parity, long h, long w, long c);

}  // namespace geogan::models
