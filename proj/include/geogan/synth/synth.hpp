#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geogan/image/raster.hpp"
#include "geogan/nn/tensor.hpp"
#include "geogan/tilegrid/geo.hpp"

namespace geogan::synth {

/// Deterministic satellite-like tile: smooth random color fields.
image::Raster sat_tile(long size, std::uint64_t seed);

/// Map-style rendering of a satellite tile: pixels quantized to a four-color
/// palette (water, vegetation, road, background) by channel dominance. The
/// mapping is a pure function of the satellite image, so generators can
/// learn it.
image::Raster map_tile_from_sat(const image::Raster& sat);

/// Paired (satellite, map) tensors at training resolution, values in [-1, 1].
struct PairedTensors {
  std::vector<nn::Tensor> sat;
  std::vector<nn::Tensor> map;
};
PairedTensors paired_dataset(long count, long image_size, std::uint64_t seed);

/// Options for a mock-provider fixture tree.
struct FixtureOptions {
  int year = 2020;
  long tile_px = 512;
  /// Tiles (by index into the spec list) whose in-month scenes all exceed the
  /// cloud threshold; a clean scene exists only in the extension window.
  std::vector<std::size_t> cloudy_tiles;
  /// Tiles with no scene catalogue and no imagery at all.
  std::vector<std::size_t> missing_tiles;
  /// Tiles with a catalogue but a missing image file for every season.
  std::vector<std::size_t> broken_image_tiles;
};

/// Writes a complete fixture directory for MockSceneProvider/MockMapProvider:
/// per tile a `.scenes` catalogue (two candidates per season month plus one
/// extension-window candidate), one PPM per scene, and the map tile.
void make_mock_fixtures(const std::string& dir, const std::vector<tilegrid::TileSpec>& tiles,
                        std::uint64_t seed, const FixtureOptions& opts = {});

/// 28x28 grayscale digit rendered from seven-segment strokes with jittered
/// geometry; label is d in 0..9.
std::vector<unsigned char> render_digit(int d, std::uint64_t seed);

/// IDX-format files as used by the MNIST distribution.
void write_idx_images(const std::string& path, const std::vector<std::vector<unsigned char>>& images,
                      long rows, long cols);
void write_idx_labels(const std::string& path, const std::vector<unsigned char>& labels);

/// Writes `<dir>/images-idx3-ubyte` and `<dir>/labels-idx1-ubyte` with
/// `count` procedural digits cycling through the ten classes.
void make_digit_fixture(const std::string& dir, long count, std::uint64_t seed);

}  // namespace geogan::synth
