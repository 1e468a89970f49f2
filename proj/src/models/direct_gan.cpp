#include "geogan/models/models.hpp"

namespace geogan::models {

using nn::Var;

namespace {

void check_image(const nn::Tensor& v, long size, long channels, const char* what) {
  if (v.rank() != 4 || v.dim(1) != size || v.dim(2) != size || v.dim(3) != channels) {
    throw ShapeError(std::string(what) + ": expected (N," + std::to_string(size) + "," +
                         std::to_string(size) + "," + std::to_string(channels) + "), got " +
                         v.shape_str());
  }
}

}  // namespace

Var generator_direct_forward(Forward& f, const Var& sat) {
  const auto& d = f.cfg.direct;
  check_image(sat.value(), d.image_size, d.in_channels, "direct generator input");
  Var x = sat;
  for (std::size_t i = 0; i < d.gen_filters.size(); ++i) {
    const std::string name = "gen/l" + std::to_string(i);
    // Two receptive-field sizes compete for weights in every layer.
    Var k3 = nn::conv2d(x, f.params(name + "/w3"), f.params(name + "/b3"), 1, nn::Pad::Same,
                        name + "/3x3");
    Var k5 = nn::conv2d(x, f.params(name + "/w5"), f.params(name + "/b5"), 1, nn::Pad::Same,
                        name + "/5x5");
    x = nn::leaky_relu(nn::concat({k3, k5}, 3), f.cfg.leaky_slope);
  }
  x = nn::conv2d_transpose(x, f.params("gen/out/w"), f.params("gen/out/b"), 1, nn::Pad::Same,
                           d.image_size, d.image_size, "gen/out");
  return nn::tanh_(x);
}

Var discriminator_direct_forward(Forward& f, const Var& sat, const Var& map) {
  const auto& d = f.cfg.direct;
  check_image(sat.value(), d.image_size, d.in_channels, "direct discriminator satellite input");
  check_image(map.value(), d.image_size, d.in_channels, "direct discriminator map input");
  Var x = nn::concat({sat, map}, 3);
  for (std::size_t i = 0; i < d.disc_filters.size(); ++i) {
    const std::string name = "disc/c" + std::to_string(i);
    x = nn::leaky_relu(nn::conv2d(x, f.params(name + "/w"), f.params(name + "/b"), 2, nn::Pad::Same,
                                  name),
                       f.cfg.leaky_slope);
  }
  // 4x4 head applied valid; remaining positions average into one probability
  // per sample (a single position at 64 px, a 5x5 patch grid at 256 px).
  x = nn::conv2d(x, f.params("disc/head/w"), f.params("disc/head/b"), 1, nn::Pad::Valid,
                 "disc/head");
  x = nn::sigmoid_(x);
  const long positions = x.value().size() / x.value().dim(0);
  Var prob = nn::scale(nn::reduce_nonbatch_sum(x), 1.0 / static_cast<double>(positions));
  return nn::clamp(prob, kProbEps, 1.0 - kProbEps);
}

}  // namespace geogan::models
