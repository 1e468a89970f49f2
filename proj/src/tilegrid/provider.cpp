#include "geogan/tilegrid/provider.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace geogan::tilegrid {

namespace {

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("fixture not found: '" + path + "'");
  return std::vector<unsigned char>((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<SceneCandidate> MockSceneProvider::list_candidates(const TileSpec& tile,
                                                               const DateWindow& window) {
  const std::string path = dir_ + "/" + tile.tile_id() + ".scenes";
  std::ifstream is(path);
  if (!is) return {};
  std::vector<SceneCandidate> out;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    SceneCandidate c;
    std::string date;
    if (!(ls >> c.scene_id >> date >> c.cloud_fraction)) {
      throw ParseError("bad scene catalogue line in '" + path + "'", line_no);
    }
    c.acquisition_date = Date::from_string(date);
    if (window.contains(c.acquisition_date)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<unsigned char> MockSceneProvider::fetch(const TileSpec&, const std::string& scene_id) {
  if (scene_id.empty()) throw InvalidArgument("MockSceneProvider::fetch: empty scene_id");
  return read_file_bytes(dir_ + "/" + scene_id + ".ppm");
}

std::vector<SceneCandidate> MockMapProvider::list_candidates(const TileSpec&,
                                                             const DateWindow& window) {
  return {SceneCandidate{"", window.start, 0.0}};
}

std::vector<unsigned char> MockMapProvider::fetch(const TileSpec& tile, const std::string&) {
  return read_file_bytes(dir_ + "/" + tile.tile_id() + "_map.ppm");
}

}  // namespace geogan::tilegrid
