#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "geogan/core/rng.hpp"
#include "geogan/synth/synth.hpp"
#include "geogan/tilegrid/fetch.hpp"
#include "geogan/tilegrid/geo.hpp"
#include "geogan/tilegrid/manifest.hpp"
#include "geogan/tilegrid/pairing.hpp"
#include "geogan/tilegrid/provider.hpp"
#include "geogan/tilegrid/scene.hpp"

using namespace geogan;
using namespace geogan::tilegrid;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("ground resolution matches the slippy-map scheme") {
  // 2*pi*R/256 at the equator, zoom 0
  CHECK(ground_resolution(0.0, 0) == doctest::Approx(156543.03392).epsilon(1e-9));
  // the published zoom-14 value at New York's latitude
  CHECK(ground_resolution(40.7128, 14) == doctest::Approx(7.242090).epsilon(1e-3));
  CHECK(ground_resolution(40.7128, 14) > 7.232);
  CHECK(ground_resolution(40.7128, 14) < 7.252);
  // cos(60 deg) = 1/2 exactly halves the equatorial zoom-14 value
  CHECK(ground_resolution(60.0, 14) == doctest::Approx(4.77731).epsilon(1e-5));

  CHECK_THROWS_AS(ground_resolution(86.0, 14), InvalidArgument);
  CHECK_THROWS_AS(ground_resolution(-89.0, 14), InvalidArgument);
  CHECK_THROWS_AS(ground_resolution(0.0, -1), InvalidArgument);
}

TEST_CASE("ground resolution halves per zoom step and is even in latitude") {
  for (double lat : {-72.5, -40.7128, 0.0, 33.3, 60.0, 85.0}) {
    for (int z = 0; z < 20; ++z) {
      CHECK(ground_resolution(lat, z + 1) ==
            doctest::Approx(ground_resolution(lat, z) / 2).epsilon(1e-14));
    }
    CHECK(ground_resolution(lat, 14) == doctest::Approx(ground_resolution(-lat, 14)).epsilon(1e-14));
  }
}

namespace {

// Independent per-axis tile count: walk boundaries until the box is covered.
long brute_force_axis_count(double span, double step) {
  long n = 0;
  double covered = 0;
  while (covered < span - 1e-9 * span) {
    covered += step;
    ++n;
  }
  return std::max(n, 1L);
}

GeoBox box_of_tile_spans(double center_lat, double center_lon, int zoom, long size_px,
                         double height_tiles, double width_tiles) {
  const double step_m = static_cast<double>(size_px) * ground_resolution(center_lat, zoom);
  const double m_per_deg = 2.0 * 3.14159265358979323846 * 6378137.0 / 360.0;
  const double dlat = step_m / m_per_deg;
  const double dlon = step_m / (m_per_deg * std::cos(center_lat * 3.14159265358979323846 / 180.0));
  GeoBox b;
  b.lat_min = center_lat - height_tiles * dlat / 2;
  b.lat_max = center_lat + height_tiles * dlat / 2;
  b.lon_min = center_lon - width_tiles * dlon / 2;
  b.lon_max = center_lon + width_tiles * dlon / 2;
  return b;
}

}  // namespace

TEST_CASE("generate_grid covers boxes row-major from the north-west") {
  SUBCASE("one-tile box") {
    const GeoBox b = box_of_tile_spans(40.0, -74.0, 14, 512, 1.0, 1.0);
    const auto tiles = generate_grid(b, 14, 512);
    REQUIRE(tiles.size() == 1);
    CHECK(tiles[0].tile_id() == "00000_00000_z14");
  }
  SUBCASE("2x3 box gives 6 tiles in row-major order") {
    const GeoBox b = box_of_tile_spans(40.0, -74.0, 14, 512, 2.0, 3.0);
    const auto tiles = generate_grid(b, 14, 512);
    REQUIRE(tiles.size() == 6);
    CHECK(tiles[0].row == 0);
    CHECK(tiles[0].col == 0);
    CHECK(tiles[1].col == 1);
    CHECK(tiles[3].row == 1);
    CHECK(tiles[3].col == 0);
    // rows go south, columns go east
    CHECK(tiles[0].center_lat > tiles[3].center_lat);
    CHECK(tiles[0].center_lon < tiles[1].center_lon);
  }
  SUBCASE("degenerate box is rejected") {
    GeoBox b{40.1, 40.0, -74.0, -73.9};
    CHECK_THROWS_AS(generate_grid(b, 14, 512), InvalidArgument);
  }
}

TEST_CASE("generate_grid count equals the brute-force per-axis product") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const double lat = rng.uniform(-70.0, 70.0);
    const double lon = rng.uniform(-170.0, 170.0);
    const double ht = rng.uniform(0.3, 4.7);
    const double wt = rng.uniform(0.3, 4.7);
    const GeoBox b = box_of_tile_spans(lat, lon, 14, 512, ht, wt);
    const auto tiles = generate_grid(b, 14, 512);

    const double step_m = 512.0 * ground_resolution(0.5 * (b.lat_min + b.lat_max), 14);
    const double m_per_deg = 2.0 * 3.14159265358979323846 * 6378137.0 / 360.0;
    const double dlat = step_m / m_per_deg;
    const double dlon =
        step_m / (m_per_deg * std::cos(0.5 * (b.lat_min + b.lat_max) * 3.14159265358979323846 / 180.0));
    const long expect = brute_force_axis_count(b.lat_max - b.lat_min, dlat) *
                        brute_force_axis_count(b.lon_max - b.lon_min, dlon);
    CHECK(static_cast<long>(tiles.size()) == expect);

    // every corner of the box falls inside some tile
    for (double lat_pt : {b.lat_min + 1e-9, b.lat_max - 1e-9}) {
      for (double lon_pt : {b.lon_min + 1e-9, b.lon_max - 1e-9}) {
        bool covered = false;
        for (const auto& t : tiles) {
          if (std::abs(lat_pt - t.center_lat) <= dlat / 2 + 1e-9 &&
              std::abs(lon_pt - t.center_lon) <= dlon / 2 + 1e-9) {
            covered = true;
            break;
          }
        }
        CHECK(covered);
      }
    }
  }
}

TEST_CASE("select_scene prefers the least cloudy scene") {
  const DateWindow march = month_window(2020, 3);
  SUBCASE("in-window minimum below threshold wins") {
    std::vector<SceneCandidate> c = {{"a", Date{2020, 3, 10}, 0.03}, {"b", Date{2020, 3, 20}, 0.12}};
    CHECK(select_scene(c, march, 4).scene_id == "a");
  }
  SUBCASE("window extension finds the clean scene") {
    std::vector<SceneCandidate> c = {{"a", Date{2020, 3, 10}, 0.15},
                                     {"b", Date{2020, 3, 20}, 0.30},
                                     {"x", Date{2020, 4, 8}, 0.08}};
    CHECK(select_scene(c, march, 4).scene_id == "x");
  }
  SUBCASE("empty candidate list raises no-scene") {
    CHECK_THROWS_AS(select_scene({}, march, 4), NoSceneError);
  }
  SUBCASE("only cloudy scenes: the least cloudy is returned after extensions") {
    std::vector<SceneCandidate> c = {{"a", Date{2020, 3, 10}, 0.45}, {"b", Date{2020, 3, 20}, 0.30}};
    CHECK(select_scene(c, march, 4).scene_id == "b");
  }
  SUBCASE("ties break by earliest acquisition date") {
    std::vector<SceneCandidate> c = {{"late", Date{2020, 3, 20}, 0.05},
                                     {"early", Date{2020, 3, 4}, 0.05}};
    CHECK(select_scene(c, march, 4).scene_id == "early");
  }
}

TEST_CASE("select_scene result is minimal; cloudier additions never change it") {
  Rng rng(99);
  const DateWindow june = month_window(2021, 6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SceneCandidate> c;
    const int n = 1 + static_cast<int>(rng.integer(6));
    for (int i = 0; i < n; ++i) {
      c.push_back({"s" + std::to_string(i),
                   Date{2021, 6, 1u + static_cast<unsigned>(rng.integer(28))},
                   rng.uniform(0.0, 0.5)});
    }
    const SceneCandidate chosen = select_scene(c, june, 4);
    for (const auto& cand : c) CHECK(chosen.cloud_fraction <= cand.cloud_fraction);

    c.push_back({"worse", Date{2021, 6, 15}, chosen.cloud_fraction + 0.2});
    CHECK(select_scene(c, june, 4).scene_id == chosen.scene_id);
  }
}

TEST_CASE("pair_tiles joins on tile_id with seasonal fan-out") {
  auto sat = [](const std::string& id, Season s) {
    TileEntry e;
    e.tile_id = id;
    e.season = s;
    e.path = "sat/" + id + "_" + season_name(s) + ".ppm";
    return e;
  };
  auto map = [](const std::string& id) {
    TileEntry e;
    e.tile_id = id;
    e.path = "map/" + id + ".ppm";
    return e;
  };

  SUBCASE("one map tile matches four seasonal satellite tiles") {
    std::vector<TileEntry> sats;
    for (Season s : kAllSeasons) sats.push_back(sat("00000_00000_z14", s));
    const auto result = pair_tiles(sats, {map("00000_00000_z14")}, 14, 512);
    REQUIRE(result.manifest.entries.size() == 4);
    for (const auto& e : result.manifest.entries) {
      CHECK(e.map_path == "map/00000_00000_z14.ppm");
    }
    CHECK(result.manifest.entries[0].season == Season::Mar);
    CHECK(result.manifest.entries[3].season == Season::Dec);
    CHECK(result.unmatched.empty());
  }
  SUBCASE("disjoint id sets produce an empty manifest and a full report") {
    const auto result = pair_tiles({sat("a", Season::Mar)}, {map("b")}, 14, 512);
    CHECK(result.manifest.entries.empty());
    CHECK(result.unmatched.sat.size() == 1);
    CHECK(result.unmatched.map.size() == 1);
  }
  SUBCASE("6-tile grid fully matched in row-major order") {
    std::vector<TileEntry> sats, maps;
    for (long r = 0; r < 2; ++r) {
      for (long c = 0; c < 3; ++c) {
        const std::string id = format_tile_id(r, c, 14);
        sats.push_back(sat(id, Season::Jun));
        maps.push_back(map(id));
      }
    }
    // shuffle inputs; output order must not depend on input order
    std::swap(sats[0], sats[4]);
    std::swap(maps[1], maps[3]);
    const auto result = pair_tiles(sats, maps, 14, 512);
    REQUIRE(result.manifest.entries.size() == 6);
    CHECK(result.manifest.entries[0].tile_id == "00000_00000_z14");
    CHECK(result.manifest.entries[5].tile_id == "00001_00002_z14");
  }
  SUBCASE("duplicates in one source are rejected") {
    CHECK_THROWS_AS(pair_tiles({sat("a", Season::Mar), sat("a", Season::Mar)}, {map("a")}, 14, 512),
                    DuplicateIdError);
    CHECK_THROWS_AS(pair_tiles({sat("a", Season::Mar)}, {map("a"), map("a")}, 14, 512),
                    DuplicateIdError);
  }
}

TEST_CASE("pair_tiles output size matches a brute-force set intersection") {
  Rng rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<TileEntry> sats, maps;
    std::set<std::pair<std::string, int>> sat_keys;
    std::set<std::string> map_keys;
    const long n_sat = rng.integer(12), n_map = rng.integer(8);
    for (long i = 0; i < n_sat; ++i) {
      const std::string id = format_tile_id(static_cast<long>(rng.integer(3)),
                                            static_cast<long>(rng.integer(3)), 14);
      const Season s = kAllSeasons[rng.integer(4)];
      if (!sat_keys.emplace(id, static_cast<int>(s)).second) continue;
      TileEntry e;
      e.tile_id = id;
      e.season = s;
      sats.push_back(e);
    }
    for (long i = 0; i < n_map; ++i) {
      const std::string id = format_tile_id(static_cast<long>(rng.integer(3)),
                                            static_cast<long>(rng.integer(3)), 14);
      if (!map_keys.insert(id).second) continue;
      TileEntry e;
      e.tile_id = id;
      maps.push_back(e);
    }
    long expect = 0;
    for (const auto& [id, s] : sat_keys) expect += map_keys.count(id) ? 1 : 0;
    const auto result = pair_tiles(sats, maps, 14, 512);
    CHECK(static_cast<long>(result.manifest.entries.size()) == expect);
    CHECK(result.manifest.entries.size() + result.unmatched.sat.size() == sats.size());
  }
}

TEST_CASE("manifest round-trips exactly") {
  TempDir tmp("geogan_manifest_test");
  const std::string path = tmp.str() + "/m.manifest";

  SUBCASE("empty manifest is header-only") {
    Manifest m;
    m.zoom = 14;
    m.tile_px = 512;
    write_manifest(m, path);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "GEOGAN-MANIFEST v1 zoom=14 tile_px=512");
    CHECK(!std::getline(is, line));
    CHECK(read_manifest(path) == m);
  }

  SUBCASE("entries round-trip bit-exactly, twice") {
    Manifest m;
    m.zoom = 14;
    m.tile_px = 512;
    m.created = "2024-05-01T00:00:00Z";
    Rng rng(5);
    for (long r = 0; r < 2; ++r) {
      for (Season s : kAllSeasons) {
        PairedSample p;
        p.tile_id = format_tile_id(r, 0, 14);
        p.season = s;
        p.lat = rng.uniform(-80.0, 80.0);
        p.lon = rng.uniform(-180.0, 180.0);
        p.cloud_fraction = rng.uniform(0.0, 1.0);
        p.sat_path = "sat/x.ppm";
        p.map_path = "map/x.ppm";
        m.add(p);
      }
    }
    write_manifest(m, path);
    const Manifest m2 = read_manifest(path);
    CHECK(m2 == m);
    // file bytes are stable under rewrite
    write_manifest(m2, path + ".2");
    std::ifstream f1(path, std::ios::binary), f2(path + ".2", std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
  }

  SUBCASE("truncated entry line raises a parse error naming the line") {
    Manifest m;
    PairedSample p;
    p.tile_id = "00000_00000_z14";
    p.sat_path = "s";
    p.map_path = "m";
    m.add(p);
    write_manifest(m, path);
    std::ifstream is(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    is.close();
    const auto cut = content.rfind('\t');
    std::ofstream os(path, std::ios::binary);
    os << content.substr(0, cut) << "\n";
    os.close();
    try {
      read_manifest(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  SUBCASE("version mismatch raises a version error") {
    std::ofstream os(path);
    os << "GEOGAN-MANIFEST v9 zoom=14 tile_px=512\n";
    os.close();
    CHECK_THROWS_AS(read_manifest(path), VersionError);
  }

  SUBCASE("duplicate (tile, season) is rejected on write") {
    Manifest m;
    PairedSample p;
    p.tile_id = "t";
    p.sat_path = "s";
    p.map_path = "m";
    m.add(p);
    m.add(p);
    CHECK_THROWS_AS(write_manifest(m, path), DuplicateIdError);
  }
}

TEST_CASE("fetch_tiles stores deterministic layouts through the mock provider") {
  TempDir fixtures("geogan_fixture_test");
  TempDir out("geogan_fetch_out");

  const GeoBox b = box_of_tile_spans(40.0, -74.0, 14, 512, 2.0, 3.0);
  auto tiles = generate_grid(b, 14, 512);
  REQUIRE(tiles.size() == 6);

  SUBCASE("complete fixtures, one season") {
    synth::make_mock_fixtures(fixtures.str(), tiles, 42);
    MockSceneProvider scenes(fixtures.str());
    MockMapProvider maps(fixtures.str());
    FetchConfig cfg;
    cfg.seasons = {Season::Jun};
    cfg.out_dir = out.str();
    const auto result = fetch_tiles(scenes, maps, tiles, cfg);
    CHECK(result.report.failed == 0);
    CHECK(result.report.fetched == 12);  // 6 sat + 6 map
    CHECK(result.sat_entries.size() == 6);
    for (const auto& e : result.sat_entries) CHECK(fs::exists(e.path));
  }

  SUBCASE("missing fixture produces a failure entry, pipeline continues") {
    synth::FixtureOptions opts;
    opts.missing_tiles = {2};
    synth::make_mock_fixtures(fixtures.str(), tiles, 42, opts);
    MockSceneProvider scenes(fixtures.str());
    MockMapProvider maps(fixtures.str());
    FetchConfig cfg;
    cfg.seasons = {Season::Jun};
    cfg.out_dir = out.str();
    const auto result = fetch_tiles(scenes, maps, tiles, cfg);
    CHECK(result.sat_entries.size() == 5);
    CHECK(result.report.failed == 2);  // the tile's map and its one season
    REQUIRE(!result.report.failures.empty());
    CHECK(result.report.failures[0].tile_id == tiles[2].tile_id());
  }

  SUBCASE("four seasons share the tile_id stem") {
    synth::make_mock_fixtures(fixtures.str(), {tiles[0]}, 42);
    MockSceneProvider scenes(fixtures.str());
    MockMapProvider maps(fixtures.str());
    FetchConfig cfg;
    cfg.out_dir = out.str();
    const auto result = fetch_tiles(scenes, maps, {tiles[0]}, cfg);
    CHECK(result.report.failed == 0);
    REQUIRE(result.sat_entries.size() == 4);
    const std::string stem = tiles[0].tile_id();
    for (const auto& e : result.sat_entries) {
      CHECK(e.path.find(stem) != std::string::npos);
    }
    std::set<std::string> paths;
    for (const auto& e : result.sat_entries) paths.insert(e.path);
    CHECK(paths.size() == 4);
  }

  SUBCASE("cloudy month falls back to the extension-window scene") {
    synth::FixtureOptions opts;
    opts.cloudy_tiles = {0};
    synth::make_mock_fixtures(fixtures.str(), {tiles[0]}, 42, opts);
    MockSceneProvider scenes(fixtures.str());
    MockMapProvider maps(fixtures.str());
    FetchConfig cfg;
    cfg.seasons = {Season::Mar};
    cfg.out_dir = out.str();
    const auto result = fetch_tiles(scenes, maps, {tiles[0]}, cfg);
    REQUIRE(result.sat_entries.size() == 1);
    CHECK(result.sat_entries[0].cloud_fraction == doctest::Approx(0.05));
  }
}
