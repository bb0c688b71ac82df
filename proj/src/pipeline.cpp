#include "kroncoef/pipeline.hpp"

#include "kroncoef/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace kroncoef {

namespace {

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

void append_features(const Eigen::VectorXi& padded, FeatureMode mode, std::vector<int>& out) {
    const int n = static_cast<int>(padded.size());
    switch (mode) {
        case FeatureMode::full3n:
            for (int x = 0; x < n; ++x) out.push_back(padded[x]);
            break;
        case FeatureMode::ends18:
            for (int x = 0; x < 3; ++x) out.push_back(padded[x]);
            for (int x = n - 3; x < n; ++x) out.push_back(padded[x]);
            break;
        case FeatureMode::bsum1:
            break;
    }
}

int feature_count(FeatureMode mode, int n) {
    switch (mode) {
        case FeatureMode::full3n: return 3 * n;
        case FeatureMode::ends18: return 18;
        case FeatureMode::bsum1: return 0;
    }
    return 0;
}

}  // namespace

FeatureMode parse_feature_mode(const std::string& name) {
    if (name == "full3n") return FeatureMode::full3n;
    if (name == "ends18") return FeatureMode::ends18;
    if (name == "bsum1") return FeatureMode::bsum1;
    throw std::invalid_argument("unknown feature mode: " + name);
}

ExportFormat parse_export_format(const std::string& name) {
    if (name == "csv") return ExportFormat::csv;
    if (name == "jsonl") return ExportFormat::jsonl;
    throw std::invalid_argument("unknown export format: " + name);
}

std::uint64_t export_dataset(const KroneckerTensor& tensor, const BLoadingTable& table,
                             FeatureMode mode, ExportFormat format,
                             const std::filesystem::path& path,
                             const CharacterTable* verify_chars, std::uint64_t seed) {
    if (tensor.n != table.n)
        throw std::invalid_argument("export_dataset: tensor and table n differ");
    const int n = tensor.n;
    if (mode == FeatureMode::ends18 && n < 3)
        throw std::invalid_argument("export_dataset: ends18 needs n >= 3");

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

    const std::vector<Partition> parts = enumerate_partitions(n);
    std::vector<Eigen::VectorXi> padded;
    padded.reserve(parts.size());
    for (const Partition& q : parts) padded.push_back(pad(q, n));

    if (format == ExportFormat::csv) {
        out << "i,j,k,orbit_weight";
        for (int f = 0; f < feature_count(mode, n); ++f) out << ",f" << f;
        out << ",b,g,nonzero\n";
    }

    // Seeded 1% verification sample (at least one row).
    std::vector<std::uint8_t> verify_row;
    if (verify_chars) {
        const std::size_t count = tensor.canonical_count();
        verify_row.assign(count, 0);
        std::mt19937_64 rng(seed);
        const std::size_t sample = std::max<std::size_t>(1, count / 100);
        for (std::size_t s = 0; s < sample; ++s) verify_row[rng() % count] = 1;
    }

    const int p = tensor.p;
    std::uint64_t rows = 0;
    std::size_t rank_in_lex = 0;
    std::vector<int> features;
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            for (int k = j; k < p; ++k, ++rank_in_lex) {
                TripleRecord rec;
                rec.i = static_cast<std::uint32_t>(i);
                rec.j = static_cast<std::uint32_t>(j);
                rec.k = static_cast<std::uint32_t>(k);
                rec.orbit_weight = orbit_weight(i, j, k);
                rec.g = tensor.at_sorted(i, j, k);
                rec.b = b_of_triple(table, i, j, k);

                if (verify_chars && verify_row[rank_in_lex]) {
                    const std::uint64_t g_check = kronecker_coefficient(i, j, k, *verify_chars);
                    if (g_check != rec.g)
                        throw InternalConsistencyError("export verify: coefficient mismatch");
                }

                features.clear();
                append_features(padded[static_cast<std::size_t>(i)], mode, features);
                append_features(padded[static_cast<std::size_t>(j)], mode, features);
                append_features(padded[static_cast<std::size_t>(k)], mode, features);

                if (format == ExportFormat::csv) {
                    out << rec.i << ',' << rec.j << ',' << rec.k << ',' << rec.orbit_weight;
                    for (int f : features) out << ',' << f;
                    out << ',' << format_fixed(rec.b, 6) << ',' << rec.g << ','
                        << (rec.g != 0 ? 1 : 0) << '\n';
                } else {
                    nlohmann::json line{{"i", rec.i},
                                        {"j", rec.j},
                                        {"k", rec.k},
                                        {"orbit_weight", rec.orbit_weight},
                                        {"features", features},
                                        {"b", rec.b},
                                        {"g", rec.g},
                                        {"nonzero", rec.g != 0}};
                    out << line.dump() << '\n';
                }
                ++rows;
            }
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
    return rows;
}

Histogram histogram(std::span<const double> values, std::span<const std::uint64_t> weights,
                    std::span<const std::uint8_t> labels, int bins) {
    if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
    if (values.empty()) throw std::invalid_argument("histogram: empty input");
    if (values.size() != weights.size())
        throw std::invalid_argument("histogram: values and weights differ in length");
    if (!labels.empty() && labels.size() != values.size())
        throw std::invalid_argument("histogram: labels and values differ in length");

    Histogram h;
    h.lo = *std::min_element(values.begin(), values.end());
    h.hi = *std::max_element(values.begin(), values.end());
    h.all.assign(static_cast<std::size_t>(bins), 0);
    if (!labels.empty()) {
        h.zero.assign(static_cast<std::size_t>(bins), 0);
        h.nonzero.assign(static_cast<std::size_t>(bins), 0);
    }

    const double width = (h.hi - h.lo) / bins;
    for (std::size_t r = 0; r < values.size(); ++r) {
        int bin = 0;
        if (width > 0.0)
            bin = std::min(bins - 1, static_cast<int>((values[r] - h.lo) / width));
        h.all[static_cast<std::size_t>(bin)] += weights[r];
        if (!labels.empty())
            (labels[r] ? h.nonzero : h.zero)[static_cast<std::size_t>(bin)] += weights[r];
    }
    return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
    const int bins = static_cast<int>(hist.all.size());
    const bool labeled = !hist.zero.empty();
    out << "bin_lo,bin_hi,count_all";
    if (labeled) out << ",count_zero,count_nonzero";
    out << '\n';
    const double width = (hist.hi - hist.lo) / bins;
    for (int b = 0; b < bins; ++b) {
        const double lo = hist.lo + width * b;
        const double hi = b + 1 == bins ? hist.hi : hist.lo + width * (b + 1);
        out << format_fixed(lo, 6) << ',' << format_fixed(hi, 6) << ','
            << hist.all[static_cast<std::size_t>(b)];
        if (labeled)
            out << ',' << hist.zero[static_cast<std::size_t>(b)] << ','
                << hist.nonzero[static_cast<std::size_t>(b)];
        out << '\n';
    }
}

}  // namespace kroncoef
