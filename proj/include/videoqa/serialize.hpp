#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "videoqa/params.hpp"

namespace videoqa {

// Self-describing checkpoint container, format "VQAC" version 1:
//   magic "VQAC" | u32 version | u64 header_len | header JSON (UTF-8)
//   u32 tensor_count | per tensor: u32 name_len | name | u32 ndim | u32 dims[] | f64 data[]
// All integers and floats little-endian. The header carries arbitrary JSON
// (model config, optimizer extras); tensors appear in store order. Writing is
// canonical, so save(load(f)) reproduces f byte for byte.
struct Checkpoint {
    nlohmann::json header;
    ParamStore tensors;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// FNV-1a 64-bit over a byte range; used for content hashes.
uint64_t fnv1a(const void* data, size_t len, uint64_t seed = 1469598103934665603ULL);
uint64_t hash_params(const ParamStore& params);

}  // namespace videoqa
