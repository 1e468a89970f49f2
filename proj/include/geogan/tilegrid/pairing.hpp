#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geogan/tilegrid/manifest.hpp"

namespace geogan::tilegrid {

/// One stored tile image awaiting pairing. Satellite entries carry a season;
/// map entries do not.
struct TileEntry {
  std::string tile_id;
  std::optional<Season> season;
  double lat = 0, lon = 0;
  double cloud_fraction = 0;
  std::string path;
};

struct UnmatchedReport {
  std::vector<std::string> sat;  // "tile_id SEASON" with no map tile
  std::vector<std::string> map;  // tile_id with no satellite tile at all

  bool empty() const { return sat.empty() && map.empty(); }
};

struct PairResult {
  Manifest manifest;
  UnmatchedReport unmatched;
};

/// Joins satellite entries with map entries on tile_id. Output is ordered
/// row-major by grid position (lexicographic tile_id) then by season
/// MAR, JUN, SEP, DEC. Unmatched entries are reported, never dropped
/// silently. Duplicate ids within one source raise DuplicateIdError.
PairResult pair_tiles(const std::vector<TileEntry>& sat_entries,
                      const std::vector<TileEntry>& map_entries, int zoom, long tile_px);

void write_unmatched_report(const UnmatchedReport& r, const std::string& path);

}  // namespace geogan::tilegrid
