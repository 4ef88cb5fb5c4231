//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_CHECKPOINT_H_
#define COLDDTI_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "colddti/model.h"

namespace colddti {

// "CDTP" | u16 version=1 | u32 count | per tensor: u16 name length, name,
// u8 rank, u32 dims[rank], f32 data (row-major). Little-endian throughout.
std::string encode_checkpoint(ModelParams params);
ModelParams decode_checkpoint(std::string_view bytes);

void save_checkpoint(const ModelParams &params,
                     const std::filesystem::path &path);
ModelParams load_checkpoint(const std::filesystem::path &path);

}  // namespace colddti

#endif  // COLDDTI_CHECKPOINT_H_
