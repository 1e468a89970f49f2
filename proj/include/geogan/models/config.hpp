#pragma once

#include <string>
#include <vector>

#include "geogan/core/error.hpp"
#include "geogan/nn/conv.hpp"

namespace geogan::models {

enum class Variant { EncoderGan, DirectGan, FlowGan };

const char* variant_name(Variant v);

enum class NoiseMode { Append, Add, None };

/// Latent-noise conditioning for the encoder GAN. Append concatenates a
/// Gaussian block of `dim` entries (stddev absolute); Add perturbs the
/// embedding by fraction * stddev * rms(embedding) per sample.
struct NoiseSpec {
  NoiseMode mode = NoiseMode::Add;
  long dim = 100;
  double stddev = 1.0;
  double fraction = 0.1;
};

struct ConvSpec {
  long kernel = 3;
  long stride = 2;
  long out_channels = 0;
  nn::Pad pad = nn::Pad::Same;
};

/// Encoder-conditioned GAN: satellite image -> embedding -> generated map,
/// with the discriminator conditioned on the same embedding.
struct EncoderGanConfig {
  long image_size = 64;
  long in_channels = 3;
  long embed_dim = 512;
  std::vector<ConvSpec> encoder;    // stride-2 stack, leaky relu between
  ConvSpec encoder_head;            // valid conv to 1x1 + batch norm
  std::vector<ConvSpec> generator;  // transposed convs; tanh after the last
  std::vector<ConvSpec> discriminator;
  ConvSpec disc_head;  // valid conv to 1x1
  long disc_fc_hidden = 512;
  bool shared_encoder = true;  // discriminator conditioning reuses the generator's encoder
};

/// Direct-translation GAN: dual-kernel (3x3 || 5x5) convolution layers, the
/// discriminator sees satellite and map concatenated along channels.
struct DirectGanConfig {
  long image_size = 256;
  long in_channels = 3;
  std::vector<long> gen_filters = {300, 150, 60, 20};  // n per layer; output is 2n
  std::vector<long> disc_filters = {128, 256, 512, 768, 1024};
  long disc_head_kernel = 4;
};

/// RealNVP-style flow generator over flattened images with FC coupling nets,
/// plus an unconditional convolutional discriminator.
struct FlowGanConfig {
  long image_size = 64;
  long channels = 3;
  long hidden = 512;
  /// tanh-bound the log-scale before exponentiation; the raw variant
  /// reproduces the numerical-overflow failure mode.
  bool bounded_scale = true;
  std::vector<ConvSpec> discriminator;
  ConvSpec disc_head;
  long disc_fc_hidden = 512;
};

struct ArchConfig {
  Variant variant = Variant::EncoderGan;
  NoiseSpec noise;
  double leaky_slope = 0.2;
  EncoderGanConfig enc;
  DirectGanConfig direct;
  FlowGanConfig flow;

  long image_size() const;
  long latent_dim() const;  // encoder GAN generator input width
  long flow_dim() const { return flow.image_size * flow.image_size * flow.channels; }

  void validate() const;

  /// Canonical layer tables (image_size 64 or 256 as published; 32 drops one
  /// stride-2 stage for the MNIST harness).
  static ArchConfig encoder_gan(long image_size = 64);
  static ArchConfig direct_gan(long image_size = 256);
  static ArchConfig flow_gan(long image_size = 64);
};

}  // namespace geogan::models
