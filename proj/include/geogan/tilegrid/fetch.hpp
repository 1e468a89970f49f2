#pragma once

#include <string>
#include <vector>

#include "geogan/tilegrid/pairing.hpp"
#include "geogan/tilegrid/provider.hpp"

namespace geogan::tilegrid {

struct FetchConfig {
  std::vector<Season> seasons{Season::Mar, Season::Jun, Season::Sep, Season::Dec};
  int year = 2020;
  int max_extensions = 4;
  SceneSelectPolicy policy;
  std::string out_dir;
  bool overwrite = false;  // when false, existing files count as skipped
};

struct FetchFailure {
  std::string tile_id;
  std::string detail;
};

struct FetchReport {
  long fetched = 0, skipped = 0, failed = 0;
  std::vector<FetchFailure> failures;
};

struct FetchResult {
  std::vector<TileEntry> sat_entries;
  std::vector<TileEntry> map_entries;
  FetchReport report;
};

/// Downloads every tile (per season for satellite imagery) through the
/// providers into a deterministic layout under out_dir:
///   sat/<tile_id>_<SEASON>.ppm   map/<tile_id>.ppm
/// Scene choice follows select_scene over the provider catalogue. Individual
/// provider failures become report entries; the pipeline continues.
FetchResult fetch_tiles(TileProvider& scene_provider, TileProvider& map_provider,
                        const std::vector<TileSpec>& specs, const FetchConfig& cfg);

void write_fetch_report(const FetchReport& r, const std::string& path);

}  // namespace geogan::tilegrid
