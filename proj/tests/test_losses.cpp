#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "geogan/core/rng.hpp"
#include "geogan/losses/losses.hpp"

using namespace geogan;
using namespace geogan::losses;
using nn::Tensor;
using nn::Var;

namespace {

Tensor random_tensor(std::vector<long> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (long i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

Tensor filled(std::vector<long> shape, double v) { return Tensor(std::move(shape), v); }

// Brute-force Gram of one HWC image: quadruple loop, no linear algebra.
Tensor gram_oracle(const Tensor& img) {
  const long h = img.dim(0), w = img.dim(1), c = img.dim(2);
  Tensor g({c, c});
  for (long i = 0; i < c; ++i) {
    for (long j = 0; j < c; ++j) {
      double s = 0;
      for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
          s += img.at({y, x, i}) * img.at({y, x, j});
        }
      }
      g.at({i, j}) = s;
    }
  }
  return g;
}

double style_oracle(const Tensor& fake, const Tensor& real) {
  // batch of HWC images
  const long n = fake.dim(0), h = fake.dim(1), w = fake.dim(2), c = fake.dim(3);
  double total = 0;
  for (long b = 0; b < n; ++b) {
    Tensor fi({h, w, c}), ri({h, w, c});
    for (long i = 0; i < fi.size(); ++i) {
      fi[i] = fake[b * fi.size() + i];
      ri[i] = real[b * fi.size() + i];
    }
    const Tensor gf = gram_oracle(fi), gr = gram_oracle(ri);
    double s = 0;
    for (long i = 0; i < gf.size(); ++i) s += (gf[i] - gr[i]) * (gf[i] - gr[i]);
    total += s / (4.0 * static_cast<double>(c * c) * static_cast<double>(h * w * h * w));
  }
  return total / static_cast<double>(n);
}

Tensor single(std::vector<double> values, long h, long w, long c) {
  return Tensor::from({h, w, c}, std::move(values));
}

Tensor batch1(std::vector<double> values, long h, long w, long c) {
  return Tensor::from({1, h, w, c}, std::move(values));
}

}  // namespace

TEST_CASE("discriminator objective worked examples") {
  const double eps = kProbEps;
  CHECK(d_objective(filled({4}, 1.0 - eps), filled({4}, eps)) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(d_objective(filled({4}, 0.5), filled({4}, 0.5)) ==
        doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(d_objective(filled({3}, 0.8), filled({3}, 0.3)) ==
        doctest::Approx(std::log(0.8) + std::log(0.7)).epsilon(1e-12));
  CHECK(d_objective(filled({3}, 0.8), filled({3}, 0.3)) == doctest::Approx(-0.57982).epsilon(1e-4));
  CHECK_THROWS_AS(d_objective(Tensor({0}), filled({2}, 0.5)), InvalidArgument);
}

TEST_CASE("non-saturating generator objective worked examples") {
  CHECK(g_nonsaturating(filled({4}, 1.0 - kProbEps)) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(g_nonsaturating(filled({4}, 0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(g_nonsaturating(filled({4}, 0.25)) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(g_nonsaturating(Tensor({0})), InvalidArgument);
}

TEST_CASE("reconstruction worked examples") {
  SUBCASE("identical images give zero") {
    Rng rng(1);
    const Tensor x = random_tensor({2, 4, 4, 3}, rng);
    CHECK(reconstruction(x, x, RecNorm::L2) == 0.0);
    CHECK(reconstruction(x, x, RecNorm::L1) == 0.0);
  }
  SUBCASE("unit difference on a 64x64x3 image") {
    const Tensor fake({1, 64, 64, 3}, 1.0);
    const Tensor real({1, 64, 64, 3}, 0.0);
    CHECK(reconstruction(fake, real, RecNorm::L2) ==
          doctest::Approx(std::sqrt(12288.0)).epsilon(1e-12));
    CHECK(reconstruction(fake, real, RecNorm::L2) == doctest::Approx(110.851).epsilon(1e-4));
    CHECK(reconstruction(fake, real, RecNorm::L1) == doctest::Approx(12288.0).epsilon(1e-12));
  }
  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS(reconstruction(Tensor({1, 4, 4, 3}), Tensor({1, 4, 4, 1}), RecNorm::L2),
                    ShapeError);
  }
}

TEST_CASE("gram worked examples") {
  SUBCASE("zero image gives the zero matrix") {
    const Tensor g = gram(single({0, 0, 0, 0}, 2, 2, 1));
    for (long i = 0; i < g.size(); ++i) CHECK(g[i] == 0.0);
  }
  SUBCASE("1-channel [1,2] gives [[5]]") {
    const Tensor g = gram(single({1, 2}, 1, 2, 1));
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(5.0).epsilon(1e-15));
  }
  SUBCASE("orthonormal channel rows give the identity") {
    // channels as C x M rows: F = [[1,0],[0,1]] -> pixels (1,0) and (0,1)
    const Tensor g = gram(single({1, 0, 0, 1}, 1, 2, 2));
    CHECK(g.at({0, 0}) == doctest::Approx(1.0));
    CHECK(g.at({0, 1}) == doctest::Approx(0.0));
    CHECK(g.at({1, 0}) == doctest::Approx(0.0));
    CHECK(g.at({1, 1}) == doctest::Approx(1.0));
  }
}

TEST_CASE("style loss worked examples") {
  SUBCASE("identical images give zero") {
    Rng rng(2);
    const Tensor x = random_tensor({3, 3, 3, 2}, rng);
    CHECK(style_loss(x, x) == 0.0);
  }
  SUBCASE("1-channel M=2: fake [1,2] vs real [0,0] gives 25/16") {
    CHECK(style_loss(batch1({1, 2}, 1, 2, 1), batch1({0, 0}, 1, 2, 1)) ==
          doctest::Approx(25.0 / 16.0).epsilon(1e-15));
  }
  SUBCASE("1-channel M=2: fake [2,4] vs real [1,2] gives 14.0625") {
    CHECK(style_loss(batch1({2, 4}, 1, 2, 1), batch1({1, 2}, 1, 2, 1)) ==
          doctest::Approx(14.0625).epsilon(1e-15));
  }
}

TEST_CASE("gram and style match the brute-force oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const long h = 1 + static_cast<long>(rng.integer(6));
    const long w = 1 + static_cast<long>(rng.integer(6));
    const long c = 1 + static_cast<long>(rng.integer(3));
    const long n = 1 + static_cast<long>(rng.integer(2));
    const Tensor fake = random_tensor({n, h, w, c}, rng);
    const Tensor real = random_tensor({n, h, w, c}, rng);

    Tensor first({h, w, c});
    for (long i = 0; i < first.size(); ++i) first[i] = fake[i];
    const Tensor g = gram(first);
    const Tensor go = gram_oracle(first);
    for (long i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(go[i]).epsilon(1e-10));

    CHECK(style_loss(fake, real) == doctest::Approx(style_oracle(fake, real)).epsilon(1e-10));
  }
}

TEST_CASE("gram matrices are symmetric positive semi-definite") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const long c = 2 + static_cast<long>(rng.integer(3));
    const Tensor img = random_tensor({3, 4, c}, rng, -2.0, 2.0);
    const Tensor g = gram(img);
    Eigen::MatrixXd m(c, c);
    for (long i = 0; i < c; ++i) {
      for (long j = 0; j < c; ++j) {
        m(i, j) = g.at({i, j});
        CHECK(g.at({i, j}) == doctest::Approx(g.at({j, i})).epsilon(1e-12));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    for (long i = 0; i < c; ++i) CHECK(solver.eigenvalues()[i] >= -1e-10);
  }
}

TEST_CASE("style loss is invariant under shared pixel permutations") {
  Rng rng(5);
  const Tensor fake = random_tensor({1, 4, 4, 3}, rng);
  const Tensor real = random_tensor({1, 4, 4, 3}, rng);
  const double base = style_loss(fake, real);

  std::vector<long> perm(16);
  for (long i = 0; i < 16; ++i) perm[i] = i;
  rng.shuffle(perm);
  Tensor pfake({1, 4, 4, 3}), preal({1, 4, 4, 3});
  for (long p = 0; p < 16; ++p) {
    for (long c = 0; c < 3; ++c) {
      pfake[p * 3 + c] = fake[perm[p] * 3 + c];
      preal[p * 3 + c] = real[perm[p] * 3 + c];
    }
  }
  CHECK(style_loss(pfake, preal) == doctest::Approx(base).epsilon(1e-10));
}

namespace {

// Dense finite-difference check of a scalar loss against its tape gradient.
double loss_fd_max_rel_err(const std::function<Var(const std::vector<Var>&)>& fn,
                           const std::vector<Tensor>& inputs, double eps = 1e-6) {
  std::vector<Var> leaves;
  for (const Tensor& t : inputs) leaves.push_back(Var::leaf(t, true));
  Var loss = fn(leaves);
  loss.backward();
  std::vector<Tensor> grads;
  for (const Var& l : leaves) grads.push_back(l.grad());

  auto eval = [&](const std::vector<Tensor>& ins) {
    std::vector<Var> consts;
    for (const Tensor& t : ins) consts.push_back(Var::constant(t));
    return fn(consts).value()[0];
  };

  double worst = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (long j = 0; j < inputs[k].size(); ++j) {
      auto plus = inputs, minus = inputs;
      plus[k][j] += eps;
      minus[k][j] -= eps;
      const double numeric = (eval(plus) - eval(minus)) / (2 * eps);
      const double analytic = grads[k][j];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("loss gradients match central differences to 1e-6") {
  Rng rng(6);
  const Tensor fake = random_tensor({2, 4, 4, 2}, rng);
  const Tensor real = random_tensor({2, 4, 4, 2}, rng);
  const Tensor dr = random_tensor({4}, rng, 0.2, 0.8);
  const Tensor df = random_tensor({4}, rng, 0.2, 0.8);

  CHECK(loss_fd_max_rel_err(
            [](const std::vector<Var>& v) { return d_objective(v[0], v[1]); }, {dr, df}) < 1e-6);
  CHECK(loss_fd_max_rel_err([](const std::vector<Var>& v) { return g_nonsaturating(v[0]); }, {df}) <
        1e-6);
  CHECK(loss_fd_max_rel_err(
            [](const std::vector<Var>& v) { return reconstruction(v[0], v[1], RecNorm::L2); },
            {fake, real}) < 1e-6);
  CHECK(loss_fd_max_rel_err(
            [](const std::vector<Var>& v) { return reconstruction(v[0], v[1], RecNorm::L1); },
            {fake, real}) < 1e-6);
  CHECK(loss_fd_max_rel_err(
            [](const std::vector<Var>& v) { return style_loss(v[0], v[1]); }, {fake, real}) < 1e-6);
}

TEST_CASE("total generator loss composes per the weights") {
  Rng rng(7);
  const Tensor fake = batch1({1, 2}, 1, 2, 1);
  const Tensor real = batch1({0, 0}, 1, 2, 1);
  const Tensor df = filled({2}, 0.25);

  SUBCASE("gan-only weighting equals the non-saturating loss alone") {
    LossWeights w{1, 0, 0};
    const auto out = total_g_loss(Var::constant(df), Var::constant(fake), Var::constant(real), w);
    CHECK(out.total.value()[0] == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(out.report.g_rec == 0.0);
    CHECK(out.report.g_style == 0.0);
  }
  SUBCASE("reconstruction-only with equal images is zero") {
    LossWeights w{0, 1, 0};
    const auto out = total_g_loss(Var::constant(df), Var::constant(real), Var::constant(real), w);
    CHECK(out.total.value()[0] == 0.0);
  }
  SUBCASE("unit weights sum the worked components") {
    LossWeights w{1, 1, 1};
    const auto out = total_g_loss(Var::constant(df), Var::constant(fake), Var::constant(real), w);
    const double expect = std::log(4.0) + std::sqrt(5.0) + 25.0 / 16.0;
    CHECK(out.total.value()[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(out.report.g_total ==
          doctest::Approx(w.w_gan * out.report.g_gan + w.w_rec * out.report.g_rec +
                          w.w_style * out.report.g_style)
              .epsilon(1e-12));
  }
  SUBCASE("all-zero weights are rejected") {
    LossWeights w{0, 0, 0};
    CHECK_THROWS_AS(total_g_loss(Var::constant(df), Var::constant(fake), Var::constant(real), w),
                    InvalidArgument);
  }
}

TEST_CASE("loss csv round-trips") {
  LossReport r;
  r.step = 7;
  r.d_loss = 1.25;
  r.g_gan = 0.5;
  r.g_rec = 110.851;
  r.g_style = 0.015625;
  r.g_total = 111.3666;
  const std::string path = "loss_csv_test.csv";
  {
    std::ofstream os(path);
    append_loss_csv(os, r);
  }
  const auto rows = read_loss_csv(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].step == 7);
  CHECK(rows[0].g_rec == doctest::Approx(110.851));
  std::remove(path.c_str());
}
