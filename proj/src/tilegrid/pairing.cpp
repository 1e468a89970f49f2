#include "geogan/tilegrid/pairing.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace geogan::tilegrid {

PairResult pair_tiles(const std::vector<TileEntry>& sat_entries,
                      const std::vector<TileEntry>& map_entries, int zoom, long tile_px) {
  std::map<std::string, const TileEntry*> maps;
  for (const TileEntry& e : map_entries) {
    if (!maps.emplace(e.tile_id, &e).second) {
      throw DuplicateIdError("pair_tiles: duplicate map tile '" + e.tile_id + "'");
    }
  }

  std::set<std::pair<std::string, Season>> seen_sat;
  std::vector<const TileEntry*> sats;
  sats.reserve(sat_entries.size());
  for (const TileEntry& e : sat_entries) {
    if (!e.season) {
      throw InvalidArgument("pair_tiles: satellite entry '" + e.tile_id + "' has no season tag");
    }
    if (!seen_sat.emplace(e.tile_id, *e.season).second) {
      throw DuplicateIdError("pair_tiles: duplicate satellite tile '" + e.tile_id + "' season " +
                             season_name(*e.season));
    }
    sats.push_back(&e);
  }
  std::sort(sats.begin(), sats.end(), [](const TileEntry* a, const TileEntry* b) {
    if (a->tile_id != b->tile_id) return a->tile_id < b->tile_id;
    return static_cast<int>(*a->season) < static_cast<int>(*b->season);
  });

  PairResult out;
  out.manifest.zoom = zoom;
  out.manifest.tile_px = tile_px;
  std::set<std::string> matched_maps;
  for (const TileEntry* s : sats) {
    auto it = maps.find(s->tile_id);
    if (it == maps.end()) {
      out.unmatched.sat.push_back(s->tile_id + " " + season_name(*s->season));
      continue;
    }
    matched_maps.insert(s->tile_id);
    PairedSample p;
    p.tile_id = s->tile_id;
    p.season = *s->season;
    p.lat = s->lat;
    p.lon = s->lon;
    p.cloud_fraction = s->cloud_fraction;
    p.sat_path = s->path;
    p.map_path = it->second->path;
    out.manifest.add(std::move(p));
  }
  for (const auto& [id, entry] : maps) {
    if (!matched_maps.count(id)) out.unmatched.map.push_back(id);
  }
  return out;
}

void write_unmatched_report(const UnmatchedReport& r, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  for (const std::string& s : r.sat) os << "sat-without-map\t" << s << "\n";
  for (const std::string& s : r.map) os << "map-without-sat\t" << s << "\n";
}

}  // namespace geogan::tilegrid
