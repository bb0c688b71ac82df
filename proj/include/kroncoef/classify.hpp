#pragma once

#include "kroncoef/bloading.hpp"
#include "kroncoef/kronecker.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace kroncoef {

/// One canonical triple with its b value, ground-truth label and orbit
/// weight. The weight carries ordered-triple multiplicity through every
/// accuracy computation as an exact integer.
struct DataRow {
    double b = 0.0;
    std::uint16_t i = 0, j = 0, k = 0;
    std::uint8_t weight = 0;   // 1, 3 or 6
    std::uint8_t nonzero = 0;  // 1 when g != 0
};

enum class Provenance { full_ordered, canonical_weighted };

struct LabeledDataset {
    int n = 0;
    Provenance provenance = Provenance::canonical_weighted;
    std::vector<DataRow> rows;
    std::uint64_t total_weight = 0;  // p(n)^3
};

/// Rows over all canonical triples in lexicographic order.
LabeledDataset make_dataset(const KroneckerTensor& tensor, const BLoadingTable& table);

/// Numerically stable logistic function.
double sigma(double x);

/// sigma(-b + m): boundary at the mean m of the b(t) distribution.
double f1_kan(double b, double m);

/// sigma(-0.08550718 b + 7.27970193); boundary near 85.14.
double f2_logistic(double b);

/// cos(sqrt(cos(sin(log b^2)^2)) + cos(log b))^3; requires b > 0.
double f3_symbolic(double b);

/// One-hidden-layer ReLU network in b with fixed published weights.
double fixed_snn(double b);

/// Classifier on the scalar b; true means "predict non-zero".
using Predictor = std::function<bool(double)>;

/// Decision rules from the functions above (>= 1/2 predicts non-zero).
Predictor make_f1_predictor(double m);
Predictor make_f2_predictor();
Predictor make_f3_predictor();
Predictor make_snn_predictor();
Predictor make_threshold_predictor(double threshold);   // non-zero iff b < threshold
Predictor make_logistic_predictor(double slope, double intercept);

/// First crossing of f from >= 1/2 to < 1/2 on [lo, hi], by grid scan and
/// bisection.
double locate_boundary(const std::function<double(double)>& f, double lo, double hi);

struct ClassifierReport {
    double accuracy = 0.0;
    // confusion[truth][predicted], truth/predicted 0 = zero, 1 = non-zero;
    // entries are exact ordered-triple counts.
    std::array<std::array<std::uint64_t, 2>, 2> confusion{};
    double boundary = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t split_seed = 0;
};

ClassifierReport evaluate(const Predictor& predict, const LabeledDataset& data, int threads = 0);
ClassifierReport evaluate(const Predictor& predict, const LabeledDataset& data,
                          std::span<const std::uint32_t> row_indices, int threads = 0);

struct LogisticFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool converged = false;
    int iterations = 0;
    ClassifierReport report;  // on the held-out split
};

/// Two-parameter logistic regression by Newton iteration on the weighted
/// binomial log-likelihood. Hitting the iteration cap returns the current
/// fit (perfectly separable data never converges in norm, but its boundary
/// does); a singular or non-finite step raises ConvergenceError.
LogisticFit fit_logistic(const LabeledDataset& data, double train_fraction, std::uint64_t seed);

struct ThresholdResult {
    double threshold = 0.0;
    double accuracy = 0.0;
};

/// Accuracy-maximizing stump "non-zero iff b < t" over midpoints between
/// consecutive distinct b values plus the +-infinity endpoints; ties go to
/// the smallest threshold.
ThresholdResult best_threshold(const LabeledDataset& data);
ThresholdResult best_threshold(const LabeledDataset& data,
                               std::span<const std::uint32_t> row_indices);

struct CvResult {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation across folds
};

/// Seeded Fisher-Yates shuffle (mt19937_64, modulo draw), k contiguous
/// folds; trains best_threshold on k-1 folds and scores the held-out one.
CvResult cross_validate(const LabeledDataset& data, int folds, std::uint64_t seed);

/// Majority-vote accuracy after grouping rows by exact b value: the ceiling
/// for any deterministic classifier reading only b.
double bayes_upper_bound(const LabeledDataset& data);

struct GammaFit {
    double shape = 0.0;
    double scale = 0.0;
};

/// Method of moments on population moments: shape = mean^2/var,
/// scale = var/mean.
GammaFit gamma_moments(std::span<const double> values);
GammaFit gamma_moments(std::span<const double> values, std::span<const std::uint64_t> weights);

}  // namespace kroncoef
