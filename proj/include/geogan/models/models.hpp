#pragma once

#include <cstdint>
#include <vector>

#include "geogan/core/rng.hpp"
#include "geogan/models/config.hpp"
#include "geogan/models/mask.hpp"
#include "geogan/nn/ops.hpp"
#include "geogan/nn/params.hpp"

namespace geogan::models {

/// Probabilities leaving a discriminator are clamped to
/// [kProbEps, 1 - kProbEps] so downstream logs stay finite.
inline constexpr double kProbEps = 1e-7;

/// Deterministic parameter initialization: truncated normal (stddev 0.02) for
/// conv/FC kernels, zero biases, identity batch-norm statistics. Shapes are a
/// pure function of the config.
nn::ParamSet init_params(const ArchConfig& cfg, std::uint64_t seed);

/// One graph build: which parameters, which architecture, which mode.
struct Forward {
  nn::ParamBinder& params;
  const ArchConfig& cfg;
  bool training = false;
};

inline nn::ParamBinder inference_binder(nn::ParamSet& ps) {
  return nn::ParamBinder(ps, [](const std::string&) { return false; });
}

// --- encoder-conditioned GAN (64x64) ---

nn::Var encoder_forward(Forward& f, const nn::Var& sat);  // -> (N,1,1,embed_dim)

/// Embedding + noise -> flat latent (N, latent_dim). Noise values come from
/// `rng`; the injected tensor is treated as a constant by the tape.
nn::Var inject_noise(const nn::Var& embed, const NoiseSpec& spec, Rng& rng);

nn::Var generator_enc_forward(Forward& f, const nn::Var& latent);  // -> image in (-1,1)

/// Map plus the conditioning embedding -> per-sample probability in (0,1).
nn::Var discriminator_enc_forward(Forward& f, const nn::Var& map, const nn::Var& cond);

// --- direct-translation GAN (256x256) ---

nn::Var generator_direct_forward(Forward& f, const nn::Var& sat);

/// Satellite and map concatenated channel-wise (6 input channels).
nn::Var discriminator_direct_forward(Forward& f, const nn::Var& sat, const nn::Var& map);

// --- RealNVP flow generator ---

struct CouplingDesc {
  MaskKind kind;
  Parity parity;
};

/// Two checkerboard couplings then two channel-wise couplings, parities
/// alternating so every coordinate is transformed somewhere in the stack.
std::vector<CouplingDesc> coupling_stack();

struct FlowOut {
  nn::Var x;
  nn::Var log_det;  // (N)
};

/// Noise -> image. Throws NumericalError if a coupling scale overflows.
FlowOut nvp_forward(Forward& f, const nn::Var& z);
/// Image -> noise; log_det is the negation of the forward's at matching points.
FlowOut nvp_inverse(Forward& f, const nn::Var& x);

nn::Var discriminator_flow_forward(Forward& f, const nn::Var& img);

// --- tensor-level convenience (constant parameters) ---

nn::Tensor encoder_forward(nn::ParamSet& params, const ArchConfig& cfg, const nn::Tensor& sat);

/// Runs the configured generator over a satellite batch (noise from rng where
/// the variant uses any) and returns the generated maps.
nn::Tensor generate_maps(nn::ParamSet& params, const ArchConfig& cfg, const nn::Tensor& sat,
                         Rng& rng);

}  // namespace geogan::models
