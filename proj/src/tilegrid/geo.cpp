#include "geogan/tilegrid/geo.hpp"

#include <cmath>
#include <cstdio>

namespace geogan::tilegrid {

namespace {

constexpr double kWgs84EquatorialRadius = 6378137.0;
constexpr double kPi = 3.14159265358979323846;
// 2*pi*R/256: equatorial meters per pixel at zoom 0.
constexpr double kBaseResolution = 2.0 * kPi * kWgs84EquatorialRadius / 256.0;
// 2*pi*R/360: meters per degree of latitude on the projection sphere.
constexpr double kMetersPerDegree = 2.0 * kPi * kWgs84EquatorialRadius / 360.0;

}  // namespace

void GeoBox::validate() const {
  if (!(lat_min < lat_max)) {
    throw InvalidArgument("GeoBox: lat_min must be less than lat_max");
  }
  if (!(lon_min < lon_max)) {
    throw InvalidArgument("GeoBox: lon_min must be less than lon_max");
  }
  if (lat_min < -kMercatorLatLimit || lat_max > kMercatorLatLimit) {
    throw InvalidArgument("GeoBox: latitude outside Web Mercator bounds");
  }
  if (lon_min < -180.0 || lon_max > 180.0) {
    throw InvalidArgument("GeoBox: longitude outside [-180, 180]");
  }
}

std::string format_tile_id(long row, long col, int zoom) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%05ld_%05ld_z%d", row, col, zoom);
  return buf;
}

std::string TileSpec::tile_id() const { return format_tile_id(row, col, zoom); }

double ground_resolution(double lat_deg, int zoom) {
  if (lat_deg < -kMercatorLatLimit || lat_deg > kMercatorLatLimit) {
    throw InvalidArgument("ground_resolution: latitude " + std::to_string(lat_deg) +
                          " outside Web Mercator bounds");
  }
  if (zoom < 0) {
    throw InvalidArgument("ground_resolution: negative zoom");
  }
  return kBaseResolution * std::cos(lat_deg * kPi / 180.0) / std::pow(2.0, zoom);
}

std::vector<TileSpec> generate_grid(const GeoBox& box, int zoom, long size_px) {
  box.validate();
  if (zoom < 0 || zoom > 22) throw InvalidArgument("generate_grid: zoom outside [0, 22]");
  if (size_px <= 0) throw InvalidArgument("generate_grid: size_px must be positive");

  const double center_lat = 0.5 * (box.lat_min + box.lat_max);
  const double step_m = static_cast<double>(size_px) * ground_resolution(center_lat, zoom);
  const double dlat = step_m / kMetersPerDegree;
  const double dlon = step_m / (kMetersPerDegree * std::cos(center_lat * kPi / 180.0));

  auto tile_count = [](double span, double step) {
    return std::max(1L, static_cast<long>(std::ceil(span / step - 1e-9)));
  };
  const long rows = tile_count(box.lat_max - box.lat_min, dlat);
  const long cols = tile_count(box.lon_max - box.lon_min, dlon);

  std::vector<TileSpec> tiles;
  tiles.reserve(static_cast<std::size_t>(rows * cols));
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      TileSpec t;
      t.center_lat = box.lat_max - (static_cast<double>(r) + 0.5) * dlat;
      t.center_lon = box.lon_min + (static_cast<double>(c) + 0.5) * dlon;
      t.zoom = zoom;
      t.size_px = size_px;
      t.row = r;
      t.col = c;
      tiles.push_back(t);
    }
  }
  return tiles;
}

}  // namespace geogan::tilegrid
