#include "geogan/models/models.hpp"

namespace geogan::models {

using nn::Var;

std::vector<CouplingDesc> coupling_stack() {
  return {{MaskKind::Checkerboard, Parity::Even},
          {MaskKind::Checkerboard, Parity::Odd},
          {MaskKind::Channel, Parity::Even},
          {MaskKind::Channel, Parity::Odd}};
}

namespace {

Var flatten_flow_input(const ArchConfig& cfg, const Var& v) {
  const long dim = cfg.flow_dim();
  if (v.value().rank() == 2 && v.value().dim(1) == dim) return v;
  if (v.value().rank() == 4 && v.value().size() / v.value().dim(0) == dim) {
    return nn::reshape(v, {v.value().dim(0), dim});
  }
  throw ShapeError("flow input: expected (N," + std::to_string(dim) + ") or image of " +
                       std::to_string(dim) + " values, got " + v.value().shape_str());
}

// Two FC layers with batch norm between; the flow's shift and scale nets.
Var coupling_net(Forward& f, const std::string& prefix, const Var& masked_in) {
  Var h = nn::linear(masked_in, f.params(prefix + "/fc0/w"), f.params(prefix + "/fc0/b"));
  const long n = h.value().dim(0), width = h.value().dim(1);
  h = nn::reshape(h, {n, 1, 1, width});
  h = nn::batch_norm(h, f.params(prefix + "/bn_g"), f.params(prefix + "/bn_b"),
                     f.params.set().at(prefix + "/bn_rm"), f.params.set().at(prefix + "/bn_rv"),
                     f.training);
  h = nn::reshape(h, {n, width});
  h = nn::leaky_relu(h, f.cfg.leaky_slope);
  return nn::linear(h, f.params(prefix + "/fc1/w"), f.params(prefix + "/fc1/b"));
}

struct CouplingMasks {
  nn::Tensor keep;       // m
  nn::Tensor transform;  // 1 - m
};

CouplingMasks masks_for(const ArchConfig& cfg, const CouplingDesc& desc) {
  const auto& fl = cfg.flow;
  nn::Tensor m = make_mask(desc.kind, desc.parity, fl.image_size, fl.image_size, fl.channels);
  nn::Tensor keep = nn::Tensor::from({m.size()}, std::vector<double>(m.data(), m.data() + m.size()));
  nn::Tensor inv({m.size()});
  for (long i = 0; i < m.size(); ++i) inv[i] = 1.0 - keep[i];
  return {std::move(keep), std::move(inv)};
}

void check_finite_scale(const Var& es, std::size_t layer) {
  if (!es.value().all_finite()) {
    throw NumericalError("flow/k" + std::to_string(layer) + "/scale",
                         "non-finite exp(scale) in coupling layer");
  }
}

}  // namespace

FlowOut nvp_forward(Forward& f, const Var& z) {
  Var u = flatten_flow_input(f.cfg, z);
  const long n = u.value().dim(0);
  Var log_det = Var::constant(nn::Tensor({n}));
  const auto stack = coupling_stack();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const CouplingMasks m = masks_for(f.cfg, stack[i]);
    const std::string prefix = "flow/k" + std::to_string(i);
    Var mu = nn::mask_mul(u, m.keep);
    Var s = coupling_net(f, prefix + "/s", mu);
    if (f.cfg.flow.bounded_scale) s = nn::tanh_(s);
    Var t = coupling_net(f, prefix + "/t", mu);
    Var es = exp_(s);
    check_finite_scale(es, i);
    u = nn::add(mu, nn::mask_mul(nn::add(nn::mul(u, es), t), m.transform));
    log_det = nn::add(log_det, nn::reduce_nonbatch_sum(nn::mask_mul(s, m.transform)));
  }
  const auto& fl = f.cfg.flow;
  return {nn::reshape(u, {n, fl.image_size, fl.image_size, fl.channels}), log_det};
}

FlowOut nvp_inverse(Forward& f, const Var& x) {
  Var y = flatten_flow_input(f.cfg, x);
  const long n = y.value().dim(0);
  Var log_det = Var::constant(nn::Tensor({n}));
  const auto stack = coupling_stack();
  for (std::size_t idx = stack.size(); idx-- > 0;) {
    const CouplingMasks m = masks_for(f.cfg, stack[idx]);
    const std::string prefix = "flow/k" + std::to_string(idx);
    Var my = nn::mask_mul(y, m.keep);
    Var s = coupling_net(f, prefix + "/s", my);
    if (f.cfg.flow.bounded_scale) s = nn::tanh_(s);
    Var t = coupling_net(f, prefix + "/t", my);
    Var ens = exp_(nn::neg(s));
    check_finite_scale(ens, idx);
    y = nn::add(my, nn::mask_mul(nn::mul(nn::sub(y, t), ens), m.transform));
    log_det = nn::sub(log_det, nn::reduce_nonbatch_sum(nn::mask_mul(s, m.transform)));
  }
  const auto& fl = f.cfg.flow;
  return {nn::reshape(y, {n, fl.image_size, fl.image_size, fl.channels}), log_det};
}

Var discriminator_flow_forward(Forward& f, const Var& img) {
  const auto& fl = f.cfg.flow;
  const nn::Tensor& v = img.value();
  if (v.rank() != 4 || v.dim(1) != fl.image_size || v.dim(2) != fl.image_size ||
      v.dim(3) != fl.channels) {
    throw ShapeError("flow discriminator input: expected (N," + std::to_string(fl.image_size) +
                         "," + std::to_string(fl.image_size) + "," + std::to_string(fl.channels) +
                         "), got " + v.shape_str());
  }
  Var x = img;
  for (std::size_t i = 0; i < fl.discriminator.size(); ++i) {
    const std::string name = "disc/c" + std::to_string(i);
    x = nn::leaky_relu(nn::conv2d(x, f.params(name + "/w"), f.params(name + "/b"),
                                  fl.discriminator[i].stride, fl.discriminator[i].pad, name),
                       f.cfg.leaky_slope);
  }
  x = nn::leaky_relu(nn::conv2d(x, f.params("disc/head/w"), f.params("disc/head/b"),
                                fl.disc_head.stride, fl.disc_head.pad, "disc/head"),
                     f.cfg.leaky_slope);
  const long n = x.value().dim(0);
  x = nn::reshape(x, {n, x.value().size() / n});
  x = nn::leaky_relu(nn::linear(x, f.params("disc/fc0/w"), f.params("disc/fc0/b")), f.cfg.leaky_slope);
  x = nn::linear(x, f.params("disc/fc1/w"), f.params("disc/fc1/b"));
  x = nn::clamp(nn::sigmoid_(x), kProbEps, 1.0 - kProbEps);
  return nn::reshape(x, {n});
}

}  // namespace geogan::models
