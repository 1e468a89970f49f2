#pragma once

#include <functional>
#include <map>
#include <string>

#include "geogan/nn/autodiff.hpp"
#include "geogan/nn/tensor.hpp"

namespace geogan::nn {

/// Named parameter tensors keyed by a stable path string ("gen/c0/w", ...).
/// Map ordering keeps serialization and iteration deterministic.
struct ParamSet {
  std::map<std::string, Tensor> tensors;

  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool has(const std::string& name) const { return tensors.count(name) != 0; }
  void add(const std::string& name, Tensor t);
  long total_size() const;
  bool equals_bits(const ParamSet& other) const;
};

/// Checkpoint container: version header line, then per tensor a length-prefixed
/// path string, rank, dims, and 64-bit little-endian floats. Round-trips are
/// bit-exact.
void save_params(const ParamSet& ps, const std::string& path);
ParamSet load_params(const std::string& path);
void write_params(const ParamSet& ps, std::ostream& os);
ParamSet read_params(std::istream& is);

/// Binds a ParamSet into autodiff leaves for one graph build. Each name maps
/// to a single Var, trainable or constant per the filter, so gradients can be
/// read back by name after backward().
class ParamBinder {
public:
  explicit ParamBinder(ParamSet& ps) : ps_(ps), trainable_([](const std::string&) { return true; }) {}
  ParamBinder(ParamSet& ps, std::function<bool(const std::string&)> trainable)
      : ps_(ps), trainable_(std::move(trainable)) {}

  Var operator()(const std::string& name);

  ParamSet& set() { return ps_; }
  const std::map<std::string, Var>& bound() const { return bound_; }

private:
  ParamSet& ps_;
  std::function<bool(const std::string&)> trainable_;
  std::map<std::string, Var> bound_;
};

}  // namespace geogan::nn
