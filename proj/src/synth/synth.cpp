#include "geogan/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "geogan/core/rng.hpp"
#include "geogan/tilegrid/manifest.hpp"
#include "geogan/tilegrid/scene.hpp"

namespace geogan::synth {

namespace fs = std::filesystem;

image::Raster sat_tile(long size, std::uint64_t seed) {
  Rng rng(seed);
  struct Blob {
    double cx, cy, radius, amp[3];
  };
  std::vector<Blob> blobs;
  const int n_blobs = 6 + static_cast<int>(rng.integer(5));
  for (int i = 0; i < n_blobs; ++i) {
    Blob b;
    b.cx = rng.uniform() * static_cast<double>(size);
    b.cy = rng.uniform() * static_cast<double>(size);
    b.radius = (0.15 + 0.25 * rng.uniform()) * static_cast<double>(size);
    for (double& a : b.amp) a = rng.uniform(-0.9, 0.9);
    blobs.push_back(b);
  }
  const double base[3] = {rng.uniform(0.2, 0.5), rng.uniform(0.3, 0.6), rng.uniform(0.2, 0.5)};

  image::Raster r;
  r.width = size;
  r.height = size;
  r.rgb.resize(static_cast<std::size_t>(size * size * 3));
  for (long y = 0; y < size; ++y) {
    for (long x = 0; x < size; ++x) {
      double v[3] = {base[0], base[1], base[2]};
      for (const Blob& b : blobs) {
        const double dx = static_cast<double>(x) - b.cx;
        const double dy = static_cast<double>(y) - b.cy;
        const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * b.radius * b.radius));
        for (int c = 0; c < 3; ++c) v[c] += b.amp[c] * w;
      }
      for (int c = 0; c < 3; ++c) {
        r.pixel(x, y)[c] =
            static_cast<unsigned char>(std::lround(std::clamp(v[c], 0.0, 1.0) * 255.0));
      }
    }
  }
  return r;
}

image::Raster map_tile_from_sat(const image::Raster& sat) {
  image::Raster m = sat;
  for (long y = 0; y < sat.height; ++y) {
    for (long x = 0; x < sat.width; ++x) {
      const unsigned char* p = sat.pixel(x, y);
      unsigned char* q = m.pixel(x, y);
      const int r = p[0], g = p[1], b = p[2];
      if (b > g && b > r) {
        q[0] = 170; q[1] = 210; q[2] = 255;  // water
      } else if (g > r + 16) {
        q[0] = 196; q[1] = 230; q[2] = 196;  // vegetation
      } else if (r + g + b > 540) {
        q[0] = 255; q[1] = 255; q[2] = 255;  // road / built-up
      } else {
        q[0] = 242; q[1] = 240; q[2] = 233;  // background
      }
    }
  }
  return m;
}

PairedTensors paired_dataset(long count, long image_size, std::uint64_t seed) {
  PairedTensors out;
  out.sat.reserve(static_cast<std::size_t>(count));
  out.map.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const image::Raster s = sat_tile(image_size, seed + static_cast<std::uint64_t>(i) * 7919);
    out.sat.push_back(image::to_tensor(s));
    out.map.push_back(image::to_tensor(map_tile_from_sat(s)));
  }
  return out;
}

void make_mock_fixtures(const std::string& dir, const std::vector<tilegrid::TileSpec>& tiles,
                        std::uint64_t seed, const FixtureOptions& opts) {
  using tilegrid::Season;
  fs::create_directories(dir);
  const std::set<std::size_t> cloudy(opts.cloudy_tiles.begin(), opts.cloudy_tiles.end());
  const std::set<std::size_t> missing(opts.missing_tiles.begin(), opts.missing_tiles.end());
  const std::set<std::size_t> broken(opts.broken_image_tiles.begin(), opts.broken_image_tiles.end());

  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto& t = tiles[i];
    const std::string id = t.tile_id();
    if (missing.count(i)) continue;

    const image::Raster sat = sat_tile(t.size_px, seed ^ (i * 0x9e3779b97f4a7c15ull));
    write_ppm(map_tile_from_sat(sat), dir + "/" + id + "_map.ppm");

    std::ofstream scenes(dir + "/" + id + ".scenes");
    for (Season season : tilegrid::kAllSeasons) {
      const unsigned month = tilegrid::season_month(season);
      char buf[160];
      const bool force_cloudy = cloudy.count(i) != 0;
      // Two in-month candidates; clean tiles get one below the 10% threshold.
      const double cloud_a = force_cloudy ? 0.35 : 0.03 + 0.01 * static_cast<double>(i % 5);
      const double cloud_b = force_cloudy ? 0.22 : 0.18;
      std::snprintf(buf, sizeof(buf), "%s_%02u_a\t%04d-%02u-08\t%.4f\n", id.c_str(), month,
                    opts.year, month, cloud_a);
      scenes << buf;
      std::snprintf(buf, sizeof(buf), "%s_%02u_b\t%04d-%02u-21\t%.4f\n", id.c_str(), month,
                    opts.year, month, cloud_b);
      scenes << buf;
      // One clean candidate shortly after the month for extension testing.
      tilegrid::Date after = tilegrid::month_window(opts.year, month).end.plus_days(9);
      std::snprintf(buf, sizeof(buf), "%s_%02u_x\t%s\t%.4f\n", id.c_str(), month,
                    after.to_string().c_str(), 0.05);
      scenes << buf;

      if (!broken.count(i)) {
        for (const char* suffix : {"_a", "_b", "_x"}) {
          char name[64];
          std::snprintf(name, sizeof(name), "%s_%02u%s", id.c_str(), month, suffix);
          // Seasonal tint over the same underlying tile.
          image::Raster seasonal = sat;
          const int tint = static_cast<int>(month) * 6;
          for (auto& byte : seasonal.rgb) {
            byte = static_cast<unsigned char>(std::clamp(static_cast<int>(byte) + tint - 30, 0, 255));
          }
          write_ppm(seasonal, dir + "/" + std::string(name) + ".ppm");
        }
      }
    }
  }
}

namespace {

void draw_segment(std::vector<unsigned char>& img, long rows, long cols, double x0, double y0,
                  double x1, double y1, double thick, double intensity) {
  const long steps = 24;
  for (long s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const double cx = x0 + (x1 - x0) * t;
    const double cy = y0 + (y1 - y0) * t;
    const long lo_y = std::max(0L, static_cast<long>(cy - thick));
    const long hi_y = std::min(rows - 1, static_cast<long>(cy + thick));
    const long lo_x = std::max(0L, static_cast<long>(cx - thick));
    const long hi_x = std::min(cols - 1, static_cast<long>(cx + thick));
    for (long y = lo_y; y <= hi_y; ++y) {
      for (long x = lo_x; x <= hi_x; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (d2 <= thick * thick) {
          auto& px = img[static_cast<std::size_t>(y * cols + x)];
          px = static_cast<unsigned char>(
              std::max<int>(px, static_cast<int>(std::lround(255.0 * intensity))));
        }
      }
    }
  }
}

}  // namespace

std::vector<unsigned char> render_digit(int d, std::uint64_t seed) {
  // Seven-segment layout:  0 top, 1 top-left, 2 top-right, 3 middle,
  // 4 bottom-left, 5 bottom-right, 6 bottom.
  static const bool kSegments[10][7] = {
      {1, 1, 1, 0, 1, 1, 1},  // 0
      {0, 0, 1, 0, 0, 1, 0},  // 1
      {1, 0, 1, 1, 1, 0, 1},  // 2
      {1, 0, 1, 1, 0, 1, 1},  // 3
      {0, 1, 1, 1, 0, 1, 0},  // 4
      {1, 1, 0, 1, 0, 1, 1},  // 5
      {1, 1, 0, 1, 1, 1, 1},  // 6
      {1, 0, 1, 0, 0, 1, 0},  // 7
      {1, 1, 1, 1, 1, 1, 1},  // 8
      {1, 1, 1, 1, 0, 1, 1},  // 9
  };
  constexpr long kSide = 28;
  Rng rng(seed);
  std::vector<unsigned char> img(kSide * kSide, 0);
  const double ox = 9.0 + rng.uniform(-2.0, 2.0);
  const double oy = 6.0 + rng.uniform(-1.5, 1.5);
  const double w = 9.0 + rng.uniform(-1.0, 1.0);
  const double h = 15.0 + rng.uniform(-1.0, 1.0);
  const double thick = 1.3 + rng.uniform(0.0, 0.9);
  const double intensity = 0.75 + rng.uniform(0.0, 0.25);
  const double x0 = ox, x1 = ox + w;
  const double y0 = oy, y1 = oy + h / 2, y2 = oy + h;
  const double ends[7][4] = {
      {x0, y0, x1, y0}, {x0, y0, x0, y1}, {x1, y0, x1, y1}, {x0, y1, x1, y1},
      {x0, y1, x0, y2}, {x1, y1, x1, y2}, {x0, y2, x1, y2},
  };
  for (int s = 0; s < 7; ++s) {
    if (kSegments[d][s]) {
      draw_segment(img, kSide, kSide, ends[s][0], ends[s][1], ends[s][2], ends[s][3], thick,
                   intensity);
    }
  }
  return img;
}

namespace {

void write_u32_be(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

void write_idx_images(const std::string& path, const std::vector<std::vector<unsigned char>>& images,
                      long rows, long cols) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_u32_be(os, 0x00000803u);
  write_u32_be(os, static_cast<std::uint32_t>(images.size()));
  write_u32_be(os, static_cast<std::uint32_t>(rows));
  write_u32_be(os, static_cast<std::uint32_t>(cols));
  for (const auto& img : images) {
    if (static_cast<long>(img.size()) != rows * cols) {
      throw InvalidArgument("write_idx_images: image size mismatch");
    }
    os.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
  }
}

void write_idx_labels(const std::string& path, const std::vector<unsigned char>& labels) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_u32_be(os, 0x00000801u);
  write_u32_be(os, static_cast<std::uint32_t>(labels.size()));
  os.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

void make_digit_fixture(const std::string& dir, long count, std::uint64_t seed) {
  fs::create_directories(dir);
  std::vector<std::vector<unsigned char>> images;
  std::vector<unsigned char> labels;
  images.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const int d = static_cast<int>(i % 10);
    images.push_back(render_digit(d, seed + static_cast<std::uint64_t>(i) * 101));
    labels.push_back(static_cast<unsigned char>(d));
  }
  write_idx_images(dir + "/images-idx3-ubyte", images, 28, 28);
  write_idx_labels(dir + "/labels-idx1-ubyte", labels);
}

}  // namespace geogan::synth
