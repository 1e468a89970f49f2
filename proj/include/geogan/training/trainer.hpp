#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geogan/core/rng.hpp"
#include "geogan/losses/losses.hpp"
#include "geogan/models/models.hpp"
#include "geogan/tilegrid/manifest.hpp"

namespace geogan::training {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  models::ArchConfig arch;
  losses::LossWeights weights;
  AdamConfig adam;
  long batch_size = 16;
  long epochs = 1;
  long g_steps_per_d_step = 1;
  std::uint64_t seed = 0;
  long checkpoint_interval = 0;  // 0: checkpoint only at the end
  long sample_grid_n = 9;
  std::string out_dir;  // empty: no artifacts written
};

/// In-memory paired dataset; images are (H,W,C) in [-1,1].
struct Dataset {
  std::vector<nn::Tensor> sat;
  std::vector<nn::Tensor> map;

  std::size_t size() const { return sat.size(); }
};

/// Loads and resamples every manifest pair to the training resolution.
/// Relative image paths resolve against base_dir.
Dataset dataset_from_manifest(const tilegrid::Manifest& m, const std::string& base_dir,
                              long image_size);

struct Batch {
  nn::Tensor sat, map;  // (B,H,W,C)
};

Batch make_batch(const Dataset& data, const std::vector<long>& indices);

struct TrainState {
  nn::ParamSet params;
  nn::ParamSet adam_m, adam_v;
  long step = 0;
  long d_updates = 0;
  long g_updates = 0;
  Rng rng;
};

TrainState init_state(const TrainConfig& cfg);

/// Parameter ownership per optimization phase. A discriminator update never
/// touches generator/encoder parameters and vice versa.
bool disc_owned(const std::string& name);
bool gen_owned(const std::string& name);

/// One discriminator update (minimizes -d_objective). Fills d_loss.
void d_phase(TrainState& state, const Batch& batch, const TrainConfig& cfg,
             losses::LossReport& report);
/// One generator/encoder update (minimizes total_g_loss). Fills g_* fields.
void g_phase(TrainState& state, const Batch& batch, const TrainConfig& cfg,
             losses::LossReport& report);

/// One discriminator update followed by g_steps_per_d_step generator updates;
/// increments the step counter and reports the component losses. Non-finite
/// losses or gradients raise NumericalError naming the offending component.
losses::LossReport train_step(TrainState& state, const Batch& batch, const TrainConfig& cfg);

/// Deterministic per-epoch sample order: a pure function of (seed, epoch).
std::vector<long> epoch_order(std::uint64_t seed, long epoch, long n);

struct TrainResult {
  TrainState state;
  std::vector<losses::LossReport> reports;
  std::string loss_csv_path;
  std::string params_path;
  std::string state_path;
};

/// Runs epochs of seeded shuffled batches (partial trailing batches are
/// dropped). Writes the loss curve every step, checkpoints on the configured
/// interval, and renders a sample grid per epoch when out_dir is set. On a
/// numerical error the state is checkpointed before the error propagates.
TrainResult train(const TrainConfig& cfg, const Dataset& data,
                  std::optional<TrainState> resume = std::nullopt);

/// Full training-state checkpoint (parameters, optimizer moments, counters,
/// rng stream). Round-trips bit-exactly.
void save_state(const TrainState& state, const std::string& path);
TrainState load_state(const std::string& path);

}  // namespace geogan::training
