//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/checksum.h"

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "colddti/errors.h"

namespace colddti {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest {};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len,
                 EVP_sha256(), nullptr)
      != 1)
    throw std::runtime_error("SHA-256 computation failed");

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs)
    throw DataError("cannot open " + path.string());
  return { std::istreambuf_iterator<char>(ifs),
           std::istreambuf_iterator<char>() };
}

std::string sha256_file(const std::filesystem::path &path) {
  return sha256_hex(read_file(path));
}

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream ofs(tmp, std::ios::binary | std::ios::trunc);
    if (!ofs)
      throw DataError("cannot write " + tmp.string());
    ofs.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!ofs)
      throw DataError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace colddti
