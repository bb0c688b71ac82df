#pragma once

#include "kroncoef/bloading.hpp"
#include "kroncoef/characters.hpp"
#include "kroncoef/classify.hpp"
#include "kroncoef/kronecker.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kroncoef {

/// One exported row: a canonical triple with its padded partition vectors,
/// coefficient, b value and orbit weight.
struct TripleRecord {
    std::uint32_t i = 0, j = 0, k = 0;
    int orbit_weight = 0;
    std::uint64_t g = 0;
    double b = 0.0;
};

/// Feature layouts for dataset export: the full concatenated padded
/// vectors (3n columns), the first and last three entries of each padded
/// vector (18 columns), or no feature columns beyond b itself.
enum class FeatureMode { full3n, ends18, bsum1 };

enum class ExportFormat { csv, jsonl };

FeatureMode parse_feature_mode(const std::string& name);
ExportFormat parse_export_format(const std::string& name);

/// Writes every canonical triple in deterministic lexicographic order.
/// CSV columns: i,j,k,orbit_weight,features...,b,g,nonzero with floats at
/// 6 decimals; JSON lines carry b at full round-trip precision. When
/// `verify_chars` is non-null a seeded 1% row sample is recomputed from
/// scratch (b from the loading table, g by character sum) and compared.
/// Returns the number of rows written.
std::uint64_t export_dataset(const KroneckerTensor& tensor, const BLoadingTable& table,
                             FeatureMode mode, ExportFormat format,
                             const std::filesystem::path& path,
                             const CharacterTable* verify_chars = nullptr,
                             std::uint64_t seed = 42);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::uint64_t> all;
    std::vector<std::uint64_t> zero;     // empty when no labels given
    std::vector<std::uint64_t> nonzero;  // empty when no labels given
};

/// Equal-width bins over [min, max]; the last bin is closed on the right.
/// Labels, when provided, additionally split counts per class.
Histogram histogram(std::span<const double> values, std::span<const std::uint64_t> weights,
                    std::span<const std::uint8_t> labels, int bins);

void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace kroncoef
