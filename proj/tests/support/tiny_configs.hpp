#pragma once

#include "geogan/models/config.hpp"

// Reduced-size architectures with the full topology, small enough for dense
// finite-difference sweeps.
namespace geogan::testsupport {

inline models::ArchConfig tiny_encoder_gan() {
  models::ArchConfig cfg;
  cfg.variant = models::Variant::EncoderGan;
  cfg.enc.image_size = 8;
  cfg.enc.embed_dim = 6;
  cfg.enc.encoder = {{3, 2, 5}};
  cfg.enc.encoder_head = {4, 1, 6, nn::Pad::Valid};
  cfg.enc.generator = {{4, 1, 7, nn::Pad::Valid}, {3, 2, 3}};
  cfg.enc.discriminator = {{3, 2, 4}};
  cfg.enc.disc_head = {4, 1, 5, nn::Pad::Valid};
  cfg.enc.disc_fc_hidden = 8;
  cfg.noise.mode = models::NoiseMode::Add;
  cfg.noise.fraction = 0.1;
  return cfg;
}

inline models::ArchConfig tiny_direct_gan() {
  models::ArchConfig cfg;
  cfg.variant = models::Variant::DirectGan;
  cfg.direct.image_size = 8;
  cfg.direct.gen_filters = {4, 3};
  cfg.direct.disc_filters = {5};
  cfg.noise.mode = models::NoiseMode::None;
  return cfg;
}

inline models::ArchConfig tiny_flow_gan() {
  models::ArchConfig cfg;
  cfg.variant = models::Variant::FlowGan;
  cfg.flow.image_size = 4;
  cfg.flow.channels = 2;
  cfg.flow.hidden = 6;
  cfg.flow.discriminator = {{3, 2, 4}};
  cfg.flow.disc_head = {2, 1, 5, nn::Pad::Valid};
  cfg.flow.disc_fc_hidden = 6;
  cfg.noise.mode = models::NoiseMode::None;
  return cfg;
}

}  // namespace geogan::testsupport
