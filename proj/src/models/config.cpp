#include "geogan/models/config.hpp"

namespace geogan::models {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::EncoderGan: return "encoder";
    case Variant::DirectGan: return "direct";
    case Variant::FlowGan: return "flow";
  }
  return "?";
}

long ArchConfig::image_size() const {
  switch (variant) {
    case Variant::EncoderGan: return enc.image_size;
    case Variant::DirectGan: return direct.image_size;
    case Variant::FlowGan: return flow.image_size;
  }
  return 0;
}

long ArchConfig::latent_dim() const {
  return enc.embed_dim + (noise.mode == NoiseMode::Append ? noise.dim : 0);
}

void ArchConfig::validate() const {
  if (noise.mode == NoiseMode::Append && noise.dim <= 0) {
    throw InvalidArgument("NoiseSpec: append mode requires dim > 0");
  }
  if (noise.fraction < 0 || noise.fraction > 1) {
    throw InvalidArgument("NoiseSpec: fraction must be in [0, 1]");
  }
  if (noise.stddev <= 0) throw InvalidArgument("NoiseSpec: stddev must be positive");
  if (variant == Variant::EncoderGan) {
    long spatial = enc.image_size;
    for (const ConvSpec& c : enc.encoder) spatial = (spatial + c.stride - 1) / c.stride;
    if (spatial != enc.encoder_head.kernel) {
      throw InvalidArgument("EncoderGanConfig: encoder stack reaches " + std::to_string(spatial) +
                            " px but the head kernel is " + std::to_string(enc.encoder_head.kernel));
    }
  }
}

namespace {

std::vector<ConvSpec> disc_stack_for(long image_size) {
  // Fig. 2 stack at 64 px; one fewer stride-2 stage at 32 px.
  if (image_size == 32) return {{3, 2, 128}, {3, 2, 256}, {3, 2, 512}};
  return {{3, 2, 128}, {3, 2, 256}, {3, 2, 512}, {3, 2, 1024}};
}

}  // namespace

ArchConfig ArchConfig::encoder_gan(long image_size) {
  if (image_size != 64 && image_size != 32) {
    throw InvalidArgument("encoder_gan: supported image sizes are 64 and 32");
  }
  ArchConfig cfg;
  cfg.variant = Variant::EncoderGan;
  cfg.enc.image_size = image_size;
  cfg.enc.embed_dim = 512;
  if (image_size == 64) {
    cfg.enc.encoder = {{3, 2, 1024}, {3, 2, 512}, {3, 2, 256}, {3, 2, 128}};
    cfg.enc.generator = {{4, 1, 1024, nn::Pad::Valid}, {8, 2, 512}, {3, 2, 128}, {3, 2, 32}, {3, 2, 3}};
  } else {
    cfg.enc.encoder = {{3, 2, 512}, {3, 2, 256}, {3, 2, 128}};
    cfg.enc.generator = {{4, 1, 512, nn::Pad::Valid}, {3, 2, 128}, {3, 2, 32}, {3, 2, 3}};
  }
  cfg.enc.encoder_head = {4, 1, cfg.enc.embed_dim, nn::Pad::Valid};
  cfg.enc.discriminator = disc_stack_for(image_size);
  cfg.enc.disc_head = {4, 1, 512, nn::Pad::Valid};
  cfg.enc.disc_fc_hidden = 512;
  return cfg;
}

ArchConfig ArchConfig::direct_gan(long image_size) {
  ArchConfig cfg;
  cfg.variant = Variant::DirectGan;
  cfg.direct.image_size = image_size;
  if (image_size == 256) {
    cfg.direct.gen_filters = {300, 150, 60, 20};
    cfg.direct.disc_filters = {128, 256, 512, 768, 1024};
  } else if (image_size == 64) {
    // Desk-scale table: same dual-kernel topology, proportionally narrower,
    // and one fewer discriminator stage so the 4x4 head stays valid.
    cfg.direct.gen_filters = {48, 24, 10, 4};
    cfg.direct.disc_filters = {64, 128, 256, 384};
  } else {
    throw InvalidArgument("direct_gan: supported image sizes are 256 and 64");
  }
  cfg.noise.mode = NoiseMode::None;
  return cfg;
}

ArchConfig ArchConfig::flow_gan(long image_size) {
  if (image_size != 64 && image_size != 32) {
    throw InvalidArgument("flow_gan: supported image sizes are 64 and 32");
  }
  ArchConfig cfg;
  cfg.variant = Variant::FlowGan;
  cfg.flow.image_size = image_size;
  cfg.flow.discriminator = disc_stack_for(image_size);
  cfg.flow.disc_head = {4, 1, 512, nn::Pad::Valid};
  cfg.flow.disc_fc_hidden = 512;
  cfg.noise.mode = NoiseMode::None;
  return cfg;
}

}  // namespace geogan::models
