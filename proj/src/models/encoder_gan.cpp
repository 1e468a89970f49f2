#include <cmath>

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

Var flatten_2d(const Var& v) {
  const long n = v.value().dim(0);
  return nn::reshape(v, {n, v.value().size() / n});
}

}  // namespace

Var encoder_forward(Forward& f, const Var& sat) {
  const auto& e = f.cfg.enc;
  check_image(sat.value(), e.image_size, e.in_channels, "encoder input");
  Var x = sat;
  for (std::size_t i = 0; i < e.encoder.size(); ++i) {
    const std::string name = "enc/c" + std::to_string(i);
    x = nn::leaky_relu(
        nn::conv2d(x, f.params(name + "/w"), f.params(name + "/b"), e.encoder[i].stride,
                   e.encoder[i].pad, name),
        f.cfg.leaky_slope);
  }
  x = nn::conv2d(x, f.params("enc/head/w"), f.params("enc/head/b"), e.encoder_head.stride,
                 e.encoder_head.pad, "enc/head");
  x = nn::batch_norm(x, f.params("enc/head/bn_g"), f.params("enc/head/bn_b"),
                     f.params.set().at("enc/head/bn_rm"), f.params.set().at("enc/head/bn_rv"),
                     f.training);
  return nn::leaky_relu(x, f.cfg.leaky_slope);
}

Var inject_noise(const Var& embed, const NoiseSpec& spec, Rng& rng) {
  Var flat = embed.value().rank() == 2 ? embed : flatten_2d(embed);
  const long n = flat.value().dim(0);
  const long d = flat.value().dim(1);
  switch (spec.mode) {
    case NoiseMode::None:
      return flat;
    case NoiseMode::Append: {
      if (spec.dim <= 0) throw InvalidArgument("inject_noise: append mode requires dim > 0");
      nn::Tensor noise({n, spec.dim});
      for (long i = 0; i < noise.size(); ++i) noise[i] = spec.stddev * rng.normal();
      return nn::concat({flat, Var::constant(std::move(noise))}, 1);
    }
    case NoiseMode::Add: {
      // Noise magnitude is relative to each sample's embedding RMS; the scale
      // itself does not participate in differentiation.
      nn::Tensor noise({n, d});
      for (long b = 0; b < n; ++b) {
        double sumsq = 0;
        for (long i = 0; i < d; ++i) {
          const double v = flat.value()[b * d + i];
          sumsq += v * v;
        }
        const double rms = std::sqrt(sumsq / static_cast<double>(d));
        const double sigma = spec.fraction * spec.stddev * rms;
        for (long i = 0; i < d; ++i) noise[b * d + i] = sigma * rng.normal();
      }
      return nn::add(flat, Var::constant(std::move(noise)));
    }
  }
  throw InvalidArgument("inject_noise: bad noise mode");
}

Var generator_enc_forward(Forward& f, const Var& latent) {
  const auto& e = f.cfg.enc;
  const long want = f.cfg.latent_dim();
  if (latent.value().rank() != 2 || latent.value().dim(1) != want) {
    throw ShapeError("generator latent: expected (N," + std::to_string(want) + "), got " +
                         latent.value().shape_str());
  }
  const long n = latent.value().dim(0);
  Var x = nn::reshape(latent, {n, 1, 1, want});
  long spatial = 1;
  for (std::size_t i = 0; i < e.generator.size(); ++i) {
    const ConvSpec& spec = e.generator[i];
    const std::string name = "gen/d" + std::to_string(i);
    spatial = spec.pad == nn::Pad::Valid ? (spatial - 1) * spec.stride + spec.kernel
                                         : spatial * spec.stride;
    x = nn::conv2d_transpose(x, f.params(name + "/w"), f.params(name + "/b"), spec.stride, spec.pad,
                             spatial, spatial, name);
    if (i + 1 < e.generator.size()) {
      x = nn::leaky_relu(x, f.cfg.leaky_slope);
    } else {
      x = nn::tanh_(x);
    }
  }
  if (spatial != e.image_size) {
    throw ShapeError("generator stack ends at " + std::to_string(spatial) + " px, expected " +
                         std::to_string(e.image_size));
  }
  return x;
}

Var discriminator_enc_forward(Forward& f, const Var& map, const Var& cond) {
  const auto& e = f.cfg.enc;
  check_image(map.value(), e.image_size, e.in_channels, "discriminator input");
  Var emb = cond.value().rank() == 2 ? cond : flatten_2d(cond);
  if (emb.value().dim(1) != e.embed_dim) {
    throw ShapeError("discriminator conditioning: expected embedding dim " +
                         std::to_string(e.embed_dim) + ", got " + emb.value().shape_str());
  }
  Var x = map;
  for (std::size_t i = 0; i < e.discriminator.size(); ++i) {
    const std::string name = "disc/c" + std::to_string(i);
    x = nn::leaky_relu(
        nn::conv2d(x, f.params(name + "/w"), f.params(name + "/b"), e.discriminator[i].stride,
                   e.discriminator[i].pad, name),
        f.cfg.leaky_slope);
  }
  x = nn::leaky_relu(nn::conv2d(x, f.params("disc/head/w"), f.params("disc/head/b"),
                                e.disc_head.stride, e.disc_head.pad, "disc/head"),
                     f.cfg.leaky_slope);
  x = flatten_2d(x);  // (N, 512)
  x = nn::concat({x, emb}, 1);
  x = nn::leaky_relu(nn::linear(x, f.params("disc/fc0/w"), f.params("disc/fc0/b")), f.cfg.leaky_slope);
  x = nn::linear(x, f.params("disc/fc1/w"), f.params("disc/fc1/b"));
  x = nn::clamp(nn::sigmoid_(x), kProbEps, 1.0 - kProbEps);
  return nn::reshape(x, {map.value().dim(0)});
}

nn::Tensor encoder_forward(nn::ParamSet& params, const ArchConfig& cfg, const nn::Tensor& sat) {
  nn::ParamBinder binder = inference_binder(params);
  Forward f{binder, cfg, false};
  return encoder_forward(f, Var::constant(sat)).value();
}

nn::Tensor generate_maps(nn::ParamSet& params, const ArchConfig& cfg, const nn::Tensor& sat,
                         Rng& rng) {
  nn::ParamBinder binder = inference_binder(params);
  Forward f{binder, cfg, false};
  switch (cfg.variant) {
    case Variant::EncoderGan: {
      Var embed = encoder_forward(f, Var::constant(sat));
      Var latent = inject_noise(embed, cfg.noise, rng);
      return generator_enc_forward(f, latent).value();
    }
    case Variant::DirectGan:
      return generator_direct_forward(f, Var::constant(sat)).value();
    case Variant::FlowGan: {
      nn::Tensor z({sat.dim(0), cfg.flow_dim()});
      for (long i = 0; i < z.size(); ++i) z[i] = rng.normal();
      return nvp_forward(f, Var::constant(std::move(z))).x.value();
    }
  }
  throw InvalidArgument("generate_maps: bad variant");
}

}  // namespace geogan::models
