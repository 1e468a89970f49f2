#pragma once

#include <string>
#include <vector>

#include "geogan/tilegrid/geo.hpp"
#include "geogan/tilegrid/scene.hpp"

namespace geogan::tilegrid {

/// Imagery source: a scene catalogue plus image retrieval. Implementations
/// must be safe to call from multiple threads.
class TileProvider {
public:
  virtual ~TileProvider() = default;

  virtual std::vector<SceneCandidate> list_candidates(const TileSpec& tile,
                                                      const DateWindow& window) = 0;

  /// Raw encoded image bytes. scene_id is empty for sources without scenes
  /// (map tiles). Throws IoError on failure.
  virtual std::vector<unsigned char> fetch(const TileSpec& tile, const std::string& scene_id) = 0;
};

/// File-backed satellite provider for offline runs. The fixture directory
/// holds, per tile, a catalogue file `<tile_id>.scenes` with lines
/// `scene_id<TAB>YYYY-MM-DD<TAB>cloud_fraction` and one image `<scene_id>.ppm`
/// per listed scene.
class MockSceneProvider : public TileProvider {
public:
  explicit MockSceneProvider(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

  std::vector<SceneCandidate> list_candidates(const TileSpec& tile,
                                              const DateWindow& window) override;
  std::vector<unsigned char> fetch(const TileSpec& tile, const std::string& scene_id) override;

private:
  std::string dir_;
};

/// File-backed map provider: serves `<tile_id>_map.ppm` from the fixture
/// directory. Maps have no scene catalogue; list_candidates returns a single
/// cloudless placeholder.
class MockMapProvider : public TileProvider {
public:
  explicit MockMapProvider(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

  std::vector<SceneCandidate> list_candidates(const TileSpec& tile,
                                              const DateWindow& window) override;
  std::vector<unsigned char> fetch(const TileSpec& tile, const std::string& scene_id) override;

private:
  std::string dir_;
};

}  // namespace geogan::tilegrid
