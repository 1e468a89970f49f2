#include "geogan/training/trainer.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "geogan/eval/sample_grid.hpp"
#include "geogan/image/raster.hpp"

namespace geogan::training {

namespace fs = std::filesystem;
using losses::LossReport;
using models::Forward;
using nn::Tensor;
using nn::Var;

Dataset dataset_from_manifest(const tilegrid::Manifest& m, const std::string& base_dir,
                              long image_size) {
  Dataset out;
  out.sat.reserve(m.entries.size());
  out.map.reserve(m.entries.size());
  auto resolve = [&](const std::string& p) {
    if (base_dir.empty() || p.empty() || p.front() == '/') return p;
    return base_dir + "/" + p;
  };
  for (const auto& e : m.entries) {
    const image::Raster sat = bilinear_resize(image::read_ppm(resolve(e.sat_path)), image_size,
                                              image_size);
    const image::Raster map = bilinear_resize(image::read_ppm(resolve(e.map_path)), image_size,
                                              image_size);
    out.sat.push_back(image::to_tensor(sat));
    out.map.push_back(image::to_tensor(map));
  }
  return out;
}

Batch make_batch(const Dataset& data, const std::vector<long>& indices) {
  if (indices.empty()) throw InvalidArgument("make_batch: empty batch");
  const auto& shape = data.sat[0].shape();
  const long per = data.sat[0].size();
  Batch b;
  b.sat = Tensor({static_cast<long>(indices.size()), shape[0], shape[1], shape[2]});
  b.map = Tensor({static_cast<long>(indices.size()), shape[0], shape[1], shape[2]});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const long idx = indices[i];
    std::memcpy(b.sat.data() + static_cast<long>(i) * per, data.sat[idx].data(),
                static_cast<std::size_t>(per) * sizeof(double));
    std::memcpy(b.map.data() + static_cast<long>(i) * per, data.map[idx].data(),
                static_cast<std::size_t>(per) * sizeof(double));
  }
  return b;
}

TrainState init_state(const TrainConfig& cfg) {
  TrainState s;
  s.params = models::init_params(cfg.arch, cfg.seed);
  s.rng = Rng(cfg.seed ^ 0x5deece66dull);
  return s;
}

bool disc_owned(const std::string& name) { return name.rfind("disc/", 0) == 0; }

bool gen_owned(const std::string& name) {
  return name.rfind("gen/", 0) == 0 || name.rfind("enc/", 0) == 0 || name.rfind("flow/", 0) == 0;
}

namespace {

void check_finite_scalar(const Var& v, const char* component) {
  if (!v.value().all_finite()) {
    throw NumericalError(component, "non-finite loss value");
  }
}

void adam_update(TrainState& state, const nn::ParamBinder& binder, long t, const AdamConfig& cfg,
                 bool (*owned)(const std::string&)) {
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (const auto& [name, var] : binder.bound()) {
    if (!owned(name) || !var.requires_grad()) continue;
    const Tensor& g = var.grad();
    if (!g.all_finite()) throw NumericalError(name, "non-finite gradient");
    if (!state.adam_m.has(name)) state.adam_m.add(name, Tensor(g.shape()));
    if (!state.adam_v.has(name)) state.adam_v.add(name, Tensor(g.shape()));
    Tensor& m = state.adam_m.at(name);
    Tensor& v = state.adam_v.at(name);
    Tensor& p = state.params.at(name);
    for (long i = 0; i < g.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      p[i] -= cfg.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.eps);
    }
  }
}

struct GanGraph {
  Var fake;
  Var d_real;
  Var d_fake;
};

// Builds the adversarial pieces for the active variant under one binder.
GanGraph build_graph(Forward& f, const Batch& batch, const TrainConfig& cfg, Rng& rng,
                     bool need_d_real) {
  GanGraph g;
  const Var sat = Var::constant(batch.sat);
  const Var real = Var::constant(batch.map);
  switch (cfg.arch.variant) {
    case models::Variant::EncoderGan: {
      Var embed = models::encoder_forward(f, sat);
      Var latent = models::inject_noise(embed, cfg.arch.noise, rng);
      g.fake = models::generator_enc_forward(f, latent);
      if (need_d_real) g.d_real = models::discriminator_enc_forward(f, real, embed);
      g.d_fake = models::discriminator_enc_forward(f, g.fake, embed);
      break;
    }
    case models::Variant::DirectGan: {
      g.fake = models::generator_direct_forward(f, sat);
      if (need_d_real) g.d_real = models::discriminator_direct_forward(f, sat, real);
      g.d_fake = models::discriminator_direct_forward(f, sat, g.fake);
      break;
    }
    case models::Variant::FlowGan: {
      Tensor z({batch.sat.dim(0), cfg.arch.flow_dim()});
      for (long i = 0; i < z.size(); ++i) z[i] = rng.normal();
      g.fake = models::nvp_forward(f, Var::constant(std::move(z))).x;
      if (need_d_real) g.d_real = models::discriminator_flow_forward(f, real);
      g.d_fake = models::discriminator_flow_forward(f, g.fake);
      break;
    }
  }
  return g;
}

}  // namespace

void d_phase(TrainState& state, const Batch& batch, const TrainConfig& cfg, LossReport& report) {
  nn::ParamBinder binder(state.params, [](const std::string& n) { return disc_owned(n); });
  // Inference mode: batch-norm statistics belong to the generator phase.
  Forward f{binder, cfg.arch, false};
  const GanGraph g = build_graph(f, batch, cfg, state.rng, true);
  Var d_loss = nn::neg(losses::d_objective(g.d_real, g.d_fake));
  check_finite_scalar(d_loss, "d_loss");
  report.d_loss = d_loss.value()[0];
  d_loss.backward();
  adam_update(state, binder, state.d_updates + 1, cfg.adam, disc_owned);
  ++state.d_updates;
}

void g_phase(TrainState& state, const Batch& batch, const TrainConfig& cfg, LossReport& report) {
  nn::ParamBinder binder(state.params, [](const std::string& n) { return gen_owned(n); });
  Forward f{binder, cfg.arch, true};
  const GanGraph g = build_graph(f, batch, cfg, state.rng, false);
  auto total = losses::total_g_loss(g.d_fake, g.fake, Var::constant(batch.map), cfg.weights);
  check_finite_scalar(total.total, "g_total");
  report.g_gan = total.report.g_gan;
  report.g_rec = total.report.g_rec;
  report.g_style = total.report.g_style;
  report.g_total = total.report.g_total;
  total.total.backward();
  adam_update(state, binder, state.g_updates + 1, cfg.adam, gen_owned);
  ++state.g_updates;
}

LossReport train_step(TrainState& state, const Batch& batch, const TrainConfig& cfg) {
  if (batch.sat.size() == 0) throw InvalidArgument("train_step: empty batch");
  if (cfg.g_steps_per_d_step < 1) {
    throw InvalidArgument("train_step: g_steps_per_d_step must be >= 1");
  }
  LossReport report;
  d_phase(state, batch, cfg, report);
  for (long i = 0; i < cfg.g_steps_per_d_step; ++i) {
    g_phase(state, batch, cfg, report);
  }
  ++state.step;
  report.step = state.step;
  return report;
}

std::vector<long> epoch_order(std::uint64_t seed, long epoch, long n) {
  std::vector<long> order(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(epoch + 1) * 0xbf58476d1ce4e5b9ull);
  rng.shuffle(order);
  return order;
}

namespace {

void write_artifacts(const TrainConfig& cfg, const TrainState& state, TrainResult& result,
                     const char* tag) {
  if (cfg.out_dir.empty()) return;
  const std::string stem = cfg.out_dir + "/" + tag + "_" + std::to_string(state.step);
  result.state_path = stem + ".state";
  result.params_path = stem + ".params";
  save_state(state, result.state_path);
  nn::save_params(state.params, result.params_path);
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const Dataset& data, std::optional<TrainState> resume) {
  cfg.arch.validate();
  cfg.weights.validate();
  if (data.size() == 0) throw InvalidArgument("train: empty dataset");
  if (cfg.batch_size <= 0) throw InvalidArgument("train: batch_size must be positive");
  if (cfg.adam.lr <= 0) throw InvalidArgument("train: learning rate must be positive");
  const long n = static_cast<long>(data.size());
  const long steps_per_epoch = n / cfg.batch_size;
  if (steps_per_epoch == 0) {
    throw InvalidArgument("train: dataset smaller than one batch");
  }
  const long total_steps = steps_per_epoch * cfg.epochs;

  TrainResult result;
  result.state = resume ? std::move(*resume) : init_state(cfg);
  TrainState& state = result.state;

  std::ofstream loss_csv;
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    result.loss_csv_path = cfg.out_dir + "/losses.csv";
    loss_csv.open(result.loss_csv_path, state.step > 0 ? std::ios::app : std::ios::trunc);
    if (state.step == 0) loss_csv << "step,d_loss,g_gan,g_rec,g_style,g_total\n";
  }

  long cached_epoch = -1;
  std::vector<long> order;
  while (state.step < total_steps) {
    const long epoch = state.step / steps_per_epoch;
    if (epoch != cached_epoch) {
      order = epoch_order(cfg.seed, epoch, n);
      cached_epoch = epoch;
    }
    const long pos = (state.step % steps_per_epoch) * cfg.batch_size;
    const std::vector<long> indices(order.begin() + pos, order.begin() + pos + cfg.batch_size);

    LossReport report;
    try {
      report = train_step(state, make_batch(data, indices), cfg);
    } catch (const NumericalError&) {
      // Preserve what we have before surfacing the diagnostic.
      write_artifacts(cfg, state, result, "abort");
      throw;
    }
    result.reports.push_back(report);
    if (loss_csv.is_open()) {
      losses::append_loss_csv(loss_csv, report);
      loss_csv.flush();
    }

    if (cfg.checkpoint_interval > 0 && state.step % cfg.checkpoint_interval == 0) {
      write_artifacts(cfg, state, result, "ckpt");
    }
    if (!cfg.out_dir.empty() && state.step % steps_per_epoch == 0) {
      // End of epoch: render a sample grid from the leading samples.
      const long grid_n = std::min<long>(cfg.sample_grid_n, n);
      const long side = static_cast<long>(std::sqrt(static_cast<double>(grid_n)));
      if (side * side >= 1) {
        Rng grid_rng(cfg.seed + 17);
        const image::Raster grid =
            eval::sample_grid(state.params, cfg.arch, data, side * side, grid_rng);
        write_ppm(grid, cfg.out_dir + "/samples_epoch_" + std::to_string(epoch + 1) + ".ppm");
      }
    }
  }

  write_artifacts(cfg, state, result, "final");
  return result;
}

void save_state(const TrainState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "GEOGAN-STATE v1\n";
  const std::string rng_blob = state.rng.serialize();
  auto write_u64 = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  write_u64(static_cast<std::uint64_t>(state.step));
  write_u64(static_cast<std::uint64_t>(state.d_updates));
  write_u64(static_cast<std::uint64_t>(state.g_updates));
  write_u64(rng_blob.size());
  os.write(rng_blob.data(), static_cast<std::streamsize>(rng_blob.size()));
  nn::write_params(state.params, os);
  nn::write_params(state.adam_m, os);
  nn::write_params(state.adam_v, os);
  if (!os) throw IoError("write failed for '" + path + "'");
}

TrainState load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::string magic;
  std::getline(is, magic);
  if (magic != "GEOGAN-STATE v1") {
    if (magic.rfind("GEOGAN-STATE", 0) == 0) throw VersionError("unsupported state version: " + magic);
    throw ParseError("not a training-state file", 1);
  }
  auto read_u64 = [&]() -> std::uint64_t {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw ParseError("truncated training state", 0);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  };
  TrainState state;
  state.step = static_cast<long>(read_u64());
  state.d_updates = static_cast<long>(read_u64());
  state.g_updates = static_cast<long>(read_u64());
  const std::uint64_t rng_len = read_u64();
  std::string rng_blob(rng_len, '\0');
  is.read(rng_blob.data(), static_cast<std::streamsize>(rng_len));
  state.rng.deserialize(rng_blob);
  state.params = nn::read_params(is);
  state.adam_m = nn::read_params(is);
  state.adam_v = nn::read_params(is);
  return state;
}

}  // namespace geogan::training
