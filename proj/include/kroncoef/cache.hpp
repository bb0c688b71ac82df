#pragma once

#include "kroncoef/bloading.hpp"
#include "kroncoef/characters.hpp"
#include "kroncoef/kronecker.hpp"

#include <filesystem>

namespace kroncoef {

// Versioned little-endian binary caches. Loaders validate magic, version
// and payload sizes and throw CacheIntegrityError / CacheVersionError
// instead of ever recomputing into the same path.
//
//   character table ("KRNC"): version u32, n u32, p u32,
//       chi row-major int64[p*p], centralizer orders uint64[p]
//   tensor          ("KRNT"): version u32, n u32, entry count u64,
//       (i u16, j u16, k u16, g u32) per canonical triple in rank order
//   b-table         ("KRNB"): version u32, n u32, p u32, eigenvalue f64,
//       w f64[p], b f64[p], mean_b3 f64, std_b3 f64

void save_character_table(const CharacterTable& table, const std::filesystem::path& path);
CharacterTable load_character_table(const std::filesystem::path& path);

void save_tensor(const KroneckerTensor& tensor, const std::filesystem::path& path);
KroneckerTensor load_tensor(const std::filesystem::path& path);

void save_b_table(const BLoadingTable& table, const std::filesystem::path& path);
BLoadingTable load_b_table(const std::filesystem::path& path);

}  // namespace kroncoef
