#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geogan/nn/ops.hpp"

namespace geogan::losses {

/// Probabilities are clamped to [kProbEps, 1 - kProbEps] inside the logs.
inline constexpr double kProbEps = 1e-7;

enum class RecNorm { L1, L2 };

struct LossWeights {
  double w_gan = 1.0;
  double w_rec = 1.0;
  double w_style = 1.0;
  RecNorm rec_norm = RecNorm::L2;

  void validate() const;
};

/// Per-step loss values. g_total = w_gan*g_gan + w_rec*g_rec + w_style*g_style.
struct LossReport {
  long step = 0;
  double d_loss = 0;
  double g_gan = 0;
  double g_rec = 0;
  double g_style = 0;
  double g_total = 0;
};

// Differentiable cores. Probability inputs are (N) vectors in (0, 1).

/// E[log d_real] + E[log(1 - d_fake)]; the discriminator maximizes this, so
/// trainers minimize its negation.
nn::Var d_objective(const nn::Var& d_real, const nn::Var& d_fake);

/// -E[log d_fake], the non-saturating generator objective.
nn::Var g_nonsaturating(const nn::Var& d_fake);

/// Batch mean of the per-image normed difference: the L2 norm is the
/// per-image Frobenius norm, L1 the per-image sum of absolute differences.
nn::Var reconstruction(const nn::Var& m_fake, const nn::Var& m_real, RecNorm norm);

/// Per-image channel Gram matrices, (N,H,W,C) -> (N,C,C): G = F F^T with F
/// the C x (H*W) matrix of pixel values.
nn::Var gram(const nn::Var& images);

/// Batch mean of (1 / (4 N^2 M^2)) * sum_ij (G_ij - A_ij)^2 computed on raw
/// pixels, with N the channel count and M = H*W.
nn::Var style_loss(const nn::Var& m_fake, const nn::Var& m_real);

struct TotalLoss {
  nn::Var total;
  LossReport report;
};

/// Weighted composition of the generator objectives. Components with zero
/// weight are not evaluated and report exactly 0.
TotalLoss total_g_loss(const nn::Var& d_fake, const nn::Var& m_fake, const nn::Var& m_real,
                       const LossWeights& weights);

// Plain-tensor conveniences for evaluation and tests.
double d_objective(const nn::Tensor& d_real, const nn::Tensor& d_fake);
double g_nonsaturating(const nn::Tensor& d_fake);
double reconstruction(const nn::Tensor& m_fake, const nn::Tensor& m_real, RecNorm norm);
nn::Tensor gram(const nn::Tensor& single_image);  // (H,W,C) -> (C,C)
double style_loss(const nn::Tensor& m_fake, const nn::Tensor& m_real);

/// Loss-curve row: `step,d_loss,g_gan,g_rec,g_style,g_total`.
void append_loss_csv(std::ostream& os, const LossReport& r);
std::vector<LossReport> read_loss_csv(const std::string& path);

}  // namespace geogan::losses
