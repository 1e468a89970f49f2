#include "geogan/models/models.hpp"

namespace geogan::models {

namespace {

constexpr double kInitStd = 0.02;

nn::Tensor trunc_normal(std::vector<long> shape, Rng& rng) {
  nn::Tensor t(std::move(shape));
  for (long i = 0; i < t.size(); ++i) t[i] = rng.truncated_normal(kInitStd);
  return t;
}

void add_conv(nn::ParamSet& ps, const std::string& prefix, long k, long ci, long co, Rng& rng) {
  ps.add(prefix + "/w", trunc_normal({k, k, ci, co}, rng));
  ps.add(prefix + "/b", nn::Tensor({co}));
}

// Transposed kernels store (k,k,out,in).
void add_deconv(nn::ParamSet& ps, const std::string& prefix, long k, long ci, long co, Rng& rng) {
  ps.add(prefix + "/w", trunc_normal({k, k, co, ci}, rng));
  ps.add(prefix + "/b", nn::Tensor({co}));
}

void add_fc(nn::ParamSet& ps, const std::string& prefix, long in, long out, Rng& rng) {
  ps.add(prefix + "/w", trunc_normal({in, out}, rng));
  ps.add(prefix + "/b", nn::Tensor({out}));
}

void add_bn(nn::ParamSet& ps, const std::string& prefix, long c) {
  ps.add(prefix + "/bn_g", nn::Tensor({c}, 1.0));
  ps.add(prefix + "/bn_b", nn::Tensor({c}));
  ps.add(prefix + "/bn_rm", nn::Tensor({c}));
  ps.add(prefix + "/bn_rv", nn::Tensor({c}, 1.0));
}

void add_conv_stack(nn::ParamSet& ps, const std::string& prefix, long in_channels,
                    const std::vector<ConvSpec>& stack, Rng& rng) {
  long ci = in_channels;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    add_conv(ps, prefix + "/c" + std::to_string(i), stack[i].kernel, ci, stack[i].out_channels, rng);
    ci = stack[i].out_channels;
  }
}

long stack_out_channels(long in_channels, const std::vector<ConvSpec>& stack) {
  return stack.empty() ? in_channels : stack.back().out_channels;
}

}  // namespace

nn::ParamSet init_params(const ArchConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  nn::ParamSet ps;

  switch (cfg.variant) {
    case Variant::EncoderGan: {
      const auto& e = cfg.enc;
      add_conv_stack(ps, "enc", e.in_channels, e.encoder, rng);
      add_conv(ps, "enc/head", e.encoder_head.kernel, stack_out_channels(e.in_channels, e.encoder),
               e.embed_dim, rng);
      add_bn(ps, "enc/head", e.embed_dim);

      long ci = cfg.latent_dim();
      for (std::size_t i = 0; i < e.generator.size(); ++i) {
        add_deconv(ps, "gen/d" + std::to_string(i), e.generator[i].kernel, ci,
                   e.generator[i].out_channels, rng);
        ci = e.generator[i].out_channels;
      }

      add_conv_stack(ps, "disc", e.in_channels, e.discriminator, rng);
      add_conv(ps, "disc/head", e.disc_head.kernel,
               stack_out_channels(e.in_channels, e.discriminator), e.disc_head.out_channels, rng);
      add_fc(ps, "disc/fc0", e.disc_head.out_channels + e.embed_dim, e.disc_fc_hidden, rng);
      add_fc(ps, "disc/fc1", e.disc_fc_hidden, 1, rng);
      break;
    }
    case Variant::DirectGan: {
      const auto& d = cfg.direct;
      long ci = d.in_channels;
      for (std::size_t i = 0; i < d.gen_filters.size(); ++i) {
        const long n = d.gen_filters[i];
        const std::string prefix = "gen/l" + std::to_string(i);
        ps.add(prefix + "/w3", trunc_normal({3, 3, ci, n}, rng));
        ps.add(prefix + "/b3", nn::Tensor({n}));
        ps.add(prefix + "/w5", trunc_normal({5, 5, ci, n}, rng));
        ps.add(prefix + "/b5", nn::Tensor({n}));
        ci = 2 * n;
      }
      add_deconv(ps, "gen/out", 3, ci, d.in_channels, rng);

      long dci = 2 * d.in_channels;  // satellite and map concatenated
      for (std::size_t i = 0; i < d.disc_filters.size(); ++i) {
        add_conv(ps, "disc/c" + std::to_string(i), 3, dci, d.disc_filters[i], rng);
        dci = d.disc_filters[i];
      }
      add_conv(ps, "disc/head", d.disc_head_kernel, dci, 1, rng);
      break;
    }
    case Variant::FlowGan: {
      const auto& fl = cfg.flow;
      const long dim = cfg.flow_dim();
      const auto stack = coupling_stack();
      for (std::size_t i = 0; i < stack.size(); ++i) {
        for (const char* net : {"s", "t"}) {
          const std::string prefix = "flow/k" + std::to_string(i) + "/" + net;
          add_fc(ps, prefix + "/fc0", dim, fl.hidden, rng);
          add_bn(ps, prefix, fl.hidden);
          add_fc(ps, prefix + "/fc1", fl.hidden, dim, rng);
        }
      }
      add_conv_stack(ps, "disc", fl.channels, fl.discriminator, rng);
      add_conv(ps, "disc/head", fl.disc_head.kernel,
               stack_out_channels(fl.channels, fl.discriminator), fl.disc_head.out_channels, rng);
      add_fc(ps, "disc/fc0", fl.disc_head.out_channels, fl.disc_fc_hidden, rng);
      add_fc(ps, "disc/fc1", fl.disc_fc_hidden, 1, rng);
      break;
    }
  }
  return ps;
}

}  // namespace geogan::models
