#include "geogan/losses/losses.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace geogan::losses {

using nn::Var;

void LossWeights::validate() const {
  if (w_gan < 0 || w_rec < 0 || w_style < 0) {
    throw InvalidArgument("LossWeights: weights must be non-negative");
  }
  if (w_gan == 0 && w_rec == 0 && w_style == 0) {
    throw InvalidArgument("LossWeights: at least one weight must be positive");
  }
}

namespace {

void check_probs(const Var& p, const char* what) {
  if (p.value().size() == 0) throw InvalidArgument(std::string(what) + ": empty batch");
}

void check_pair(const Var& a, const Var& b, const char* what) {
  if (!a.value().same_shape(b.value())) {
    throw ShapeError(std::string(what) + ": shape mismatch " + a.value().shape_str() + " vs " +
                         b.value().shape_str());
  }
  if (a.value().rank() != 4) {
    throw ShapeError(std::string(what) + ": expected NHWC images, got " + a.value().shape_str());
  }
}

Var log_clamped(const Var& p) { return nn::log_(nn::clamp(p, kProbEps, 1.0 - kProbEps)); }

}  // namespace

Var d_objective(const Var& d_real, const Var& d_fake) {
  check_probs(d_real, "d_objective");
  check_probs(d_fake, "d_objective");
  Var real_term = nn::reduce_mean_all(log_clamped(d_real));
  Var fake_term = nn::reduce_mean_all(log_clamped(nn::sub(
      Var::constant(nn::Tensor(d_fake.value().shape(), 1.0)), d_fake)));
  return nn::add(real_term, fake_term);
}

Var g_nonsaturating(const Var& d_fake) {
  check_probs(d_fake, "g_nonsaturating");
  return nn::neg(nn::reduce_mean_all(log_clamped(d_fake)));
}

Var reconstruction(const Var& m_fake, const Var& m_real, RecNorm norm) {
  check_pair(m_fake, m_real, "reconstruction");
  Var diff = nn::sub(m_fake, m_real);
  if (norm == RecNorm::L2) {
    return nn::reduce_mean_all(nn::sqrt_(nn::reduce_nonbatch_sum(nn::mul(diff, diff))));
  }
  return nn::reduce_mean_all(nn::reduce_nonbatch_sum(nn::abs_(diff)));
}

Var gram(const Var& images) { return nn::gram_batch(images); }

Var style_loss(const Var& m_fake, const Var& m_real) {
  check_pair(m_fake, m_real, "style_loss");
  const long channels = m_fake.value().dim(3);
  const long m = m_fake.value().dim(1) * m_fake.value().dim(2);
  Var dg = nn::sub(nn::gram_batch(m_fake), nn::gram_batch(m_real));
  Var per_image = nn::reduce_nonbatch_sum(nn::mul(dg, dg));
  const double denom = 4.0 * static_cast<double>(channels * channels) * static_cast<double>(m * m);
  return nn::scale(nn::reduce_mean_all(per_image), 1.0 / denom);
}

TotalLoss total_g_loss(const Var& d_fake, const Var& m_fake, const Var& m_real,
                       const LossWeights& weights) {
  weights.validate();
  TotalLoss out;
  Var total = Var::constant(nn::Tensor::scalar(0.0));
  if (weights.w_gan > 0) {
    Var g = g_nonsaturating(d_fake);
    out.report.g_gan = g.value()[0];
    total = nn::add(total, nn::scale(g, weights.w_gan));
  }
  if (weights.w_rec > 0) {
    Var r = reconstruction(m_fake, m_real, weights.rec_norm);
    out.report.g_rec = r.value()[0];
    total = nn::add(total, nn::scale(r, weights.w_rec));
  }
  if (weights.w_style > 0) {
    Var s = style_loss(m_fake, m_real);
    out.report.g_style = s.value()[0];
    total = nn::add(total, nn::scale(s, weights.w_style));
  }
  out.total = total;
  out.report.g_total = total.value()[0];
  return out;
}

double d_objective(const nn::Tensor& d_real, const nn::Tensor& d_fake) {
  return d_objective(Var::constant(d_real), Var::constant(d_fake)).value()[0];
}

double g_nonsaturating(const nn::Tensor& d_fake) {
  return g_nonsaturating(Var::constant(d_fake)).value()[0];
}

double reconstruction(const nn::Tensor& m_fake, const nn::Tensor& m_real, RecNorm norm) {
  return reconstruction(Var::constant(m_fake), Var::constant(m_real), norm).value()[0];
}

nn::Tensor gram(const nn::Tensor& single_image) {
  if (single_image.rank() != 3) {
    throw ShapeError("gram: expected a single HWC image, got " + single_image.shape_str());
  }
  const long h = single_image.dim(0), w = single_image.dim(1), c = single_image.dim(2);
  nn::Tensor batched = nn::Tensor::from(
      {1, h, w, c},
      std::vector<double>(single_image.data(), single_image.data() + single_image.size()));
  nn::Tensor g = nn::gram_batch(Var::constant(batched)).value();
  return nn::Tensor::from({c, c}, std::vector<double>(g.data(), g.data() + g.size()));
}

double style_loss(const nn::Tensor& m_fake, const nn::Tensor& m_real) {
  return style_loss(Var::constant(m_fake), Var::constant(m_real)).value()[0];
}

void append_loss_csv(std::ostream& os, const LossReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g", r.step, r.d_loss, r.g_gan,
                r.g_rec, r.g_style, r.g_total);
  os << buf << "\n";
}

std::vector<LossReport> read_loss_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::vector<LossReport> out;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.rfind("step,", 0) == 0) continue;
    LossReport r;
    if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf,%lf", &r.step, &r.d_loss, &r.g_gan, &r.g_rec,
                    &r.g_style, &r.g_total) != 6) {
      throw ParseError("bad loss-curve line", line_no);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace geogan::losses
