#include "geogan/tilegrid/fetch.hpp"

#include <filesystem>
#include <fstream>

namespace geogan::tilegrid {

namespace {

namespace fs = std::filesystem;

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed for '" + path + "'");
}

}  // namespace

FetchResult fetch_tiles(TileProvider& scene_provider, TileProvider& map_provider,
                        const std::vector<TileSpec>& specs, const FetchConfig& cfg) {
  if (cfg.out_dir.empty()) throw InvalidArgument("fetch_tiles: out_dir is empty");
  fs::create_directories(cfg.out_dir + "/sat");
  fs::create_directories(cfg.out_dir + "/map");

  FetchResult out;
  for (const TileSpec& spec : specs) {
    const std::string id = spec.tile_id();

    const std::string map_path = cfg.out_dir + "/map/" + id + ".ppm";
    bool have_map = false;
    try {
      if (!cfg.overwrite && fs::exists(map_path)) {
        ++out.report.skipped;
      } else {
        write_bytes(map_path, map_provider.fetch(spec, ""));
        ++out.report.fetched;
      }
      have_map = true;
      TileEntry e;
      e.tile_id = id;
      e.lat = spec.center_lat;
      e.lon = spec.center_lon;
      e.path = map_path;
      out.map_entries.push_back(std::move(e));
    } catch (const Error& err) {
      ++out.report.failed;
      out.report.failures.push_back({id, std::string("map: ") + err.what()});
    }
    (void)have_map;

    for (Season season : cfg.seasons) {
      try {
        const std::string sat_path =
            cfg.out_dir + "/sat/" + id + "_" + season_name(season) + ".ppm";
        const DateWindow base = month_window(cfg.year, season_month(season));
        // One catalogue query at the widest extension; select_scene re-narrows.
        const DateWindow widest = base.widened(cfg.max_extensions * cfg.policy.extension_days);
        const auto candidates = scene_provider.list_candidates(spec, widest);
        SceneCandidate chosen;
        try {
          chosen = select_scene(candidates, base, cfg.max_extensions, cfg.policy);
        } catch (const NoSceneError& e) {
          throw NoSceneError("tile " + id + ": " + e.what());
        }
        if (!cfg.overwrite && fs::exists(sat_path)) {
          ++out.report.skipped;
        } else {
          write_bytes(sat_path, scene_provider.fetch(spec, chosen.scene_id));
          ++out.report.fetched;
        }
        TileEntry e;
        e.tile_id = id;
        e.season = season;
        e.lat = spec.center_lat;
        e.lon = spec.center_lon;
        e.cloud_fraction = chosen.cloud_fraction;
        e.path = sat_path;
        out.sat_entries.push_back(std::move(e));
      } catch (const Error& err) {
        ++out.report.failed;
        out.report.failures.push_back(
            {id, std::string("sat ") + season_name(season) + ": " + err.what()});
      }
    }
  }
  return out;
}

void write_fetch_report(const FetchReport& r, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "fetched=" << r.fetched << " skipped=" << r.skipped << " failed=" << r.failed << "\n";
  for (const FetchFailure& f : r.failures) os << "FAIL\t" << f.tile_id << "\t" << f.detail << "\n";
}

}  // namespace geogan::tilegrid
