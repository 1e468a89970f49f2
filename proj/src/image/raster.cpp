#include "geogan/image/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "geogan/core/error.hpp"

namespace geogan::image {

Raster Raster::solid(long width, long height, unsigned char r, unsigned char g, unsigned char b) {
  Raster out;
  out.width = width;
  out.height = height;
  out.rgb.resize(static_cast<std::size_t>(width * height * 3));
  for (long i = 0; i < width * height; ++i) {
    out.rgb[i * 3 + 0] = r;
    out.rgb[i * 3 + 1] = g;
    out.rgb[i * 3 + 2] = b;
  }
  return out;
}

std::vector<unsigned char> encode_ppm(const Raster& r) {
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "P6\n%ld %ld\n255\n", r.width, r.height);
  std::vector<unsigned char> out(header, header + n);
  out.insert(out.end(), r.rgb.begin(), r.rgb.end());
  return out;
}

Raster decode_ppm(const std::vector<unsigned char>& bytes) {
  // P6 header: magic, width, height, maxval, single whitespace, then raw data.
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any) throw ParseError("bad PPM header", 1);
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ParseError("not a P6 PPM", 1);
  }
  pos = 2;
  Raster r;
  r.width = read_int();
  r.height = read_int();
  const long maxval = read_int();
  if (maxval != 255) throw ParseError("unsupported PPM maxval", 1);
  ++pos;  // single whitespace byte before pixel data
  const std::size_t need = static_cast<std::size_t>(r.width * r.height * 3);
  if (bytes.size() - pos < need) throw ParseError("truncated PPM pixel data", 1);
  r.rgb.assign(bytes.begin() + static_cast<long>(pos), bytes.begin() + static_cast<long>(pos + need));
  return r;
}

void write_ppm(const Raster& r, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const auto bytes = encode_ppm(r);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed for '" + path + "'");
}

Raster read_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

Raster bilinear_resize(const Raster& src, long width, long height) {
  if (src.width == width && src.height == height) return src;
  Raster dst;
  dst.width = width;
  dst.height = height;
  dst.rgb.resize(static_cast<std::size_t>(width * height * 3));
  const double sx = static_cast<double>(src.width) / static_cast<double>(width);
  const double sy = static_cast<double>(src.height) / static_cast<double>(height);
  for (long y = 0; y < height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const long y0 = std::clamp(static_cast<long>(std::floor(fy)), 0L, src.height - 1);
    const long y1 = std::min(y0 + 1, src.height - 1);
    const double wy = std::clamp(fy - static_cast<double>(y0), 0.0, 1.0);
    for (long x = 0; x < width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const long x0 = std::clamp(static_cast<long>(std::floor(fx)), 0L, src.width - 1);
      const long x1 = std::min(x0 + 1, src.width - 1);
      const double wx = std::clamp(fx - static_cast<double>(x0), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        const double top = src.pixel(x0, y0)[c] * (1 - wx) + src.pixel(x1, y0)[c] * wx;
        const double bot = src.pixel(x0, y1)[c] * (1 - wx) + src.pixel(x1, y1)[c] * wx;
        dst.pixel(x, y)[c] = static_cast<unsigned char>(std::lround(top * (1 - wy) + bot * wy));
      }
    }
  }
  return dst;
}

nn::Tensor to_tensor(const Raster& r) {
  nn::Tensor t({r.height, r.width, 3});
  for (long i = 0; i < t.size(); ++i) {
    t[i] = static_cast<double>(r.rgb[static_cast<std::size_t>(i)]) / 255.0 * 2.0 - 1.0;
  }
  return t;
}

Raster from_tensor(const nn::Tensor& t) {
  if (t.rank() != 3 || t.dim(2) != 3) {
    throw ShapeError("from_tensor: expected HWC with 3 channels, got " + t.shape_str());
  }
  Raster r;
  r.height = t.dim(0);
  r.width = t.dim(1);
  r.rgb.resize(static_cast<std::size_t>(t.size()));
  for (long i = 0; i < t.size(); ++i) {
    const double v = std::clamp((t[i] + 1.0) / 2.0, 0.0, 1.0);
    r.rgb[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  return r;
}

}  // namespace geogan::image
