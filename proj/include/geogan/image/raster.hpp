#pragma once

#include <string>
#include <vector>

#include "geogan/nn/tensor.hpp"

namespace geogan::image {

/// 8-bit RGB raster, row-major, 3 bytes per pixel. On disk: binary PPM (P6).
struct Raster {
  long width = 0, height = 0;
  std::vector<unsigned char> rgb;

  static Raster solid(long width, long height, unsigned char r, unsigned char g, unsigned char b);
  unsigned char* pixel(long x, long y) { return rgb.data() + (y * width + x) * 3; }
  const unsigned char* pixel(long x, long y) const { return rgb.data() + (y * width + x) * 3; }
  bool operator==(const Raster&) const = default;
};

std::vector<unsigned char> encode_ppm(const Raster& r);
Raster decode_ppm(const std::vector<unsigned char>& bytes);

void write_ppm(const Raster& r, const std::string& path);
Raster read_ppm(const std::string& path);

Raster bilinear_resize(const Raster& r, long width, long height);

/// HWC tensor in [-1, 1] from 8-bit RGB and back (affine rescale, rounded and
/// clamped on the way out).
nn::Tensor to_tensor(const Raster& r);
Raster from_tensor(const nn::Tensor& t);

}  // namespace geogan::image
