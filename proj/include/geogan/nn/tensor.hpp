#pragma once

#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "geogan/core/error.hpp"

namespace geogan::nn {

/// Dense row-major tensor of doubles.
///
/// Conventions used across the project: images are NHWC, convolution kernels
/// are (kh, kw, c_in, c_out), transposed-convolution kernels (kh, kw, c_out,
/// c_in), fully connected weights (in, out). A scalar is a rank-0 tensor of
/// size 1.
class Tensor {
public:
  Tensor() = default;

  explicit Tensor(std::vector<long> shape) : shape_(std::move(shape)) {
    data_.assign(count(shape_), 0.0);
  }

  Tensor(std::vector<long> shape, double fill) : shape_(std::move(shape)) {
    data_.assign(count(shape_), fill);
  }

  static Tensor from(std::vector<long> shape, std::vector<double> data) {
    if (count(shape) != static_cast<long>(data.size())) {
      throw ShapeError("Tensor::from: data size does not match shape");
    }
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = std::move(data);
    return t;
  }

  static Tensor scalar(double v) { return from({}, {v}); }

  const std::vector<long>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  long dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  long size() const { return static_cast<long>(data_.size()); }
  bool defined() const { return !data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](long i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](long i) const { return data_[static_cast<std::size_t>(i)]; }

  /// Multi-index access; slow, intended for tests and small setup code.
  double& at(std::initializer_list<long> idx) { return data_[offset(idx)]; }
  double at(std::initializer_list<long> idx) const { return data_[offset(idx)]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  void add_inplace(const Tensor& o) {
    if (!same_shape(o)) throw ShapeError("add_inplace: shape mismatch");
    for (long i = 0; i < size(); ++i) data_[static_cast<std::size_t>(i)] += o[i];
  }

  void scale_inplace(double s) {
    for (double& v : data_) v *= s;
  }

  bool equals_bits(const Tensor& o) const {
    return shape_ == o.shape_ &&
           std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(double)) == 0;
  }

  static long count(const std::vector<long>& shape) {
    long n = 1;
    for (long d : shape) {
      if (d < 0) throw ShapeError("negative tensor dimension");
      n *= d;
    }
    return n;
  }

  static std::string shape_str(const std::vector<long>& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + ")";
  }

  std::string shape_str() const { return shape_str(shape_); }

private:
  std::size_t offset(std::initializer_list<long> idx) const {
    if (static_cast<int>(idx.size()) != rank()) {
      throw ShapeError("Tensor::at: index rank mismatch");
    }
    long off = 0;
    int i = 0;
    for (long v : idx) {
      off = off * shape_[static_cast<std::size_t>(i)] + v;
      ++i;
    }
    return static_cast<std::size_t>(off);
  }

  std::vector<long> shape_;
  std::vector<double> data_;
};

}  // namespace geogan::nn
