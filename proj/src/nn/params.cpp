#include "geogan/nn/params.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "geogan/core/error.hpp"

namespace geogan::nn {

namespace {

constexpr const char* kMagic = "GEOGAN-PARAMS v1";

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw ParseError("truncated parameter file", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f64_le(std::ostream& os, const double* p, long n) {
  // Doubles are stored little-endian; on little-endian hosts this is memcpy.
  for (long i = 0; i < n; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, p + i, 8);
    write_u64(os, bits);
  }
}

void read_f64_le(std::istream& is, double* p, long n) {
  for (long i = 0; i < n; ++i) {
    const std::uint64_t bits = read_u64(is);
    std::memcpy(p + i, &bits, 8);
  }
}

}  // namespace

Tensor& ParamSet::at(const std::string& name) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw InvalidArgument("ParamSet: no tensor named '" + name + "'");
  return it->second;
}

const Tensor& ParamSet::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw InvalidArgument("ParamSet: no tensor named '" + name + "'");
  return it->second;
}

void ParamSet::add(const std::string& name, Tensor t) {
  if (!tensors.emplace(name, std::move(t)).second) {
    throw InvalidArgument("ParamSet: duplicate tensor name '" + name + "'");
  }
}

long ParamSet::total_size() const {
  long n = 0;
  for (const auto& [name, t] : tensors) n += t.size();
  return n;
}

bool ParamSet::equals_bits(const ParamSet& other) const {
  if (tensors.size() != other.tensors.size()) return false;
  auto it = tensors.begin();
  auto jt = other.tensors.begin();
  for (; it != tensors.end(); ++it, ++jt) {
    if (it->first != jt->first || !it->second.equals_bits(jt->second)) return false;
  }
  return true;
}

void write_params(const ParamSet& ps, std::ostream& os) {
  os << kMagic << "\n";
  write_u64(os, ps.tensors.size());
  for (const auto& [name, t] : ps.tensors) {
    write_u64(os, name.size());
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(os, static_cast<std::uint64_t>(t.rank()));
    for (int d = 0; d < t.rank(); ++d) write_u64(os, static_cast<std::uint64_t>(t.dim(d)));
    write_f64_le(os, t.data(), t.size());
  }
}

ParamSet read_params(std::istream& is) {
  std::string magic;
  std::getline(is, magic);
  if (!is) throw ParseError("empty parameter file", 1);
  if (magic != kMagic) {
    if (magic.rfind("GEOGAN-PARAMS", 0) == 0) {
      throw VersionError("unsupported parameter file version: " + magic);
    }
    throw ParseError("not a parameter file (bad magic)", 1);
  }
  ParamSet ps;
  const std::uint64_t count = read_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t name_len = read_u64(is);
    std::string name(name_len, '\0');
    is.read(name.data(), static_cast<std::streamsize>(name_len));
    if (!is) throw ParseError("truncated tensor name", 0);
    const std::uint64_t rank = read_u64(is);
    std::vector<long> shape(rank);
    for (std::uint64_t d = 0; d < rank; ++d) shape[d] = static_cast<long>(read_u64(is));
    Tensor t(shape);
    read_f64_le(is, t.data(), t.size());
    ps.add(name, std::move(t));
  }
  return ps;
}

void save_params(const ParamSet& ps, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_params(ps, os);
  if (!os) throw IoError("write failed for '" + path + "'");
}

ParamSet load_params(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_params(is);
}

Var ParamBinder::operator()(const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  Var v = Var::leaf(ps_.at(name), trainable_(name));
  bound_.emplace(name, v);
  return v;
}

}  // namespace geogan::nn
