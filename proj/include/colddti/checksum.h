//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_CHECKSUM_H_
#define COLDDTI_CHECKSUM_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace colddti {

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path &path);

// Whole-file read; throws DataError if the file cannot be opened.
std::string read_file(const std::filesystem::path &path);

// Writes to a sibling temporary then renames over path.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view bytes);

}  // namespace colddti

#endif  // COLDDTI_CHECKSUM_H_
