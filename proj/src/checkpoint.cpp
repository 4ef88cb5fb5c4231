//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <vector>

#include "colddti/checksum.h"
#include "colddti/errors.h"

namespace colddti {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kCheckpointVersion = 1;

template <class T>
void put(std::string &out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Cursor {
public:
  explicit Cursor(std::string_view bytes): bytes_(bytes) { }

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t n) {
    need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size())
      throw DataError("checkpoint truncated");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(ModelParams params) {
  std::vector<TensorView> tensors = params.tensors();
  std::string out = "CDTP";
  put<std::uint16_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const TensorView &t: tensors) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out += t.name;
    const bool is_vector = t.name.ends_with(".bias");
    put<std::uint8_t>(out, is_vector ? 1 : 2);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.values.rows()));
    if (!is_vector)
      put<std::uint32_t>(out, static_cast<std::uint32_t>(t.values.cols()));
    for (Eigen::Index i = 0; i < t.values.rows(); ++i)
      for (Eigen::Index j = 0; j < t.values.cols(); ++j)
        put<float>(out, static_cast<float>(t.values(i, j)));
  }
  return out;
}

ModelParams decode_checkpoint(std::string_view bytes) {
  Cursor c(bytes);
  if (c.take(4) != "CDTP")
    throw DataError("checkpoint: bad magic");
  if (c.get<std::uint16_t>() != kCheckpointVersion)
    throw DataError("checkpoint: unsupported version");
  const auto count = c.get<std::uint32_t>();

  std::map<std::string, Matrix> named;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto len = c.get<std::uint16_t>();
    std::string name(c.take(len));
    const auto rank = c.get<std::uint8_t>();
    if (rank != 1 && rank != 2)
      throw DataError("checkpoint: tensor '" + name + "' has rank "
                      + std::to_string(rank));
    const auto rows = c.get<std::uint32_t>();
    const std::uint32_t cols = rank == 2 ? c.get<std::uint32_t>() : 1;
    Matrix m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j)
        m(i, j) = c.get<float>();
    if (!named.emplace(name, std::move(m)).second)
      throw DataError("checkpoint: duplicate tensor '" + name + "'");
  }
  if (!c.done())
    throw DataError("checkpoint: trailing bytes");

  auto take = [&](const std::string &name) {
    auto it = named.find(name);
    if (it == named.end())
      throw DataError("checkpoint: missing tensor '" + name + "'");
    Matrix m = std::move(it->second);
    named.erase(it);
    return m;
  };

  ModelParams p;
  if (named.contains("embedding.drug"))
    p.drug_table = take("embedding.drug");
  if (named.contains("embedding.protein"))
    p.protein_table = take("embedding.protein");
  for (std::size_t i = 0; i < kMapCount; ++i) {
    const std::string map(map_name(i));
    p.projections[i].drug_side = take("W_" + map + "." + map[0]);
    p.projections[i].protein_side = take("W_" + map + "." + map[1]);
  }
  for (int i = 0; named.contains("mlp." + std::to_string(i) + ".weight");
       ++i) {
    MlpLayer layer;
    layer.weight = take("mlp." + std::to_string(i) + ".weight");
    layer.bias = take("mlp." + std::to_string(i) + ".bias");
    p.mlp.layers.push_back(std::move(layer));
  }
  if (!named.empty())
    throw DataError("checkpoint: unexpected tensor '" + named.begin()->first
                    + "'");
  if (p.mlp.layers.empty())
    throw DataError("checkpoint: no classifier layers");
  return p;
}

void save_checkpoint(const ModelParams &params,
                     const std::filesystem::path &path) {
  write_file_atomic(path, encode_checkpoint(params));
}

ModelParams load_checkpoint(const std::filesystem::path &path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace colddti
