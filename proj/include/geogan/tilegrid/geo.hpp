#pragma once

#include <string>
#include <vector>

#include "geogan/core/error.hpp"

namespace geogan::tilegrid {

/// Poleward latitude limit of the Web Mercator projection, degrees.
inline constexpr double kMercatorLatLimit = 85.05113;

/// Geographic bounding box, degrees. North is lat_max, west is lon_min.
struct GeoBox {
  double lat_min = 0, lat_max = 0;
  double lon_min = 0, lon_max = 0;

  void validate() const;
};

/// One tile request: center coordinates plus grid position within its box.
struct TileSpec {
  double center_lat = 0, center_lon = 0;
  int zoom = 14;
  long size_px = 512;
  long row = 0, col = 0;

  std::string tile_id() const;
};

std::string format_tile_id(long row, long col, int zoom);

/// Meters of ground per pixel at the 256-px base scale of the slippy-map
/// scheme: 2*pi*R_wgs84 * cos(lat) / (256 * 2^zoom).
double ground_resolution(double lat_deg, int zoom);

/// Tiles covering `box` row-major from the north-west corner, stepped by
/// size_px * ground_resolution at the box's center latitude. Tiles may
/// overhang the south/east edges; every point of the box is covered.
std::vector<TileSpec> generate_grid(const GeoBox& box, int zoom, long size_px);

}  // namespace geogan::tilegrid
