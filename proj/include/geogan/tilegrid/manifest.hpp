#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geogan/core/error.hpp"

namespace geogan::tilegrid {

/// The four sampled months, in manifest order.
enum class Season { Mar = 0, Jun = 1, Sep = 2, Dec = 3 };

inline constexpr Season kAllSeasons[] = {Season::Mar, Season::Jun, Season::Sep, Season::Dec};

const char* season_name(Season s);                       // "MAR", "JUN", "SEP", "DEC"
std::optional<Season> parse_season(const std::string&);  // case-insensitive
unsigned season_month(Season s);                         // 3, 6, 9, 12

/// One aligned satellite/map tile pair plus its geospatial metadata.
/// Latitude/longitude are quantized to 1e-6 degrees and cloud fraction to
/// 1e-4 so the text manifest round-trips exactly.
struct PairedSample {
  std::string tile_id;
  Season season = Season::Mar;
  double lat = 0, lon = 0;
  double cloud_fraction = 0;
  std::string sat_path, map_path;

  bool operator==(const PairedSample&) const = default;
};

struct Manifest {
  int zoom = 14;
  long tile_px = 512;
  std::string created;  // optional ISO timestamp; omitted from the file when empty
  std::vector<PairedSample> entries;

  /// Quantizes coordinates and appends; rejects duplicate (tile_id, season).
  void add(PairedSample s);

  bool operator==(const Manifest&) const = default;
};

double quantize(double v, int decimals);

/// Line-oriented text format. Line 1:
///   GEOGAN-MANIFEST v1 zoom=<z> tile_px=<n> [created=<ts>]
/// then one tab-separated entry per line:
///   tile_id  season  lat  lon  cloud_fraction  sat_path  map_path
/// with 6 decimal places for lat/lon and 4 for cloud_fraction.
void write_manifest(const Manifest& m, const std::string& path);
Manifest read_manifest(const std::string& path);

}  // namespace geogan::tilegrid
