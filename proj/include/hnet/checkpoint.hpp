#pragma once

#include <filesystem>

#include "hnet/tensor.hpp"

namespace hnet {

// Binary checkpoint: magic "HNET", u8 version, u32 entry count, manifest
// (u32 name length, UTF-8 name, u32 rank, u32 dims), row-major
// little-endian f64 payloads in manifest order, then the store's rng seed
// as u64. Round-trips bit-exactly.
inline constexpr char kCheckpointMagic[4] = {'H', 'N', 'E', 'T'};
inline constexpr std::uint8_t kCheckpointVersion = 1;

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path);
ParamStore load_checkpoint(const std::filesystem::path& path);

}  // namespace hnet
