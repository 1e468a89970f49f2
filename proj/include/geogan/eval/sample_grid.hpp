#pragma once

#include "geogan/core/rng.hpp"
#include "geogan/image/raster.hpp"
#include "geogan/models/models.hpp"
#include "geogan/training/dataset_fwd.hpp"

namespace geogan::eval {

/// Composites images (HWC in [-1,1]) into a per_row x per_row grid with white
/// gutters between tiles.
image::Raster render_grid(const std::vector<nn::Tensor>& images, long per_row, long gutter = 2);

/// sqrt(n) x sqrt(n) grid of maps generated from n samples drawn from `data`
/// by seeded sampling. n must be a perfect square and data must hold at least
/// n samples.
image::Raster sample_grid(nn::ParamSet& params, const models::ArchConfig& arch,
                          const training::Dataset& data, long n, Rng& rng);

}  // namespace geogan::eval
