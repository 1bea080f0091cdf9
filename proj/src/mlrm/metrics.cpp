#include "mlrm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mlrm/kernels.hpp"

namespace mlrm {

Interpretation classify_redundancy(double r, double tol) {
    if (std::fabs(r - 1.0) <= tol) return Interpretation::FullyRedundantNeutral;
    return r < 1.0 ? Interpretation::NotFullyRedundant : Interpretation::FullyRedundantHarmful;
}

RedundancyScore redundancy_index(MetricValue before, MetricValue after, double epsilon) {
    if (!std::isfinite(before.value) || !std::isfinite(after.value)) {
        fail(Err::InvalidMetric, "redundancy_index inputs must be finite");
    }
    if (before.direction != after.direction) {
        fail(Err::DirectionMismatch, "redundancy_index inputs must share a direction");
    }
    if (!(epsilon > 0.0)) {
        fail(Err::InvalidMetric, "epsilon must be positive");
    }
    double gain = after.value - before.value;
    if (before.direction == Direction::LowerIsBetter) gain = -gain;
    double r = 1.0 - gain / (std::fabs(before.value) + epsilon);
    return {r, classify_redundancy(r)};
}

double relative_redundancy(double rate_a, double rate_b) {
    if (!std::isfinite(rate_a) || !std::isfinite(rate_b) || rate_a < 0.0 || rate_b < 0.0) {
        fail(Err::InvalidMetric, "subgroup rates must be finite and non-negative");
    }
    if (rate_b == 0.0) {
        fail(Err::DivisionByZero, "relative_redundancy reference rate is zero");
    }
    return rate_a / rate_b;
}

namespace {

// H = log2(N) - sum(c * log2 c) / N over sorted counts. Sorting makes the
// result independent of bin order; the identity makes one-bin and uniform
// histograms exact.
double entropy_from_counts(std::vector<std::uint64_t> counts) {
    std::erase(counts, std::uint64_t{0});
    if (counts.empty()) fail(Err::EmptyInput, "entropy of an empty histogram");
    std::sort(counts.begin(), counts.end());
    long double total = 0.0L;
    long double weighted = 0.0L;
    for (std::uint64_t c : counts) {
        total += static_cast<long double>(c);
        weighted += static_cast<long double>(c) * std::log2(static_cast<long double>(c));
    }
    long double h = std::log2(total) - weighted / total;
    double out = static_cast<double>(h);
    return out < 0.0 ? 0.0 : out;
}

std::vector<std::uint64_t> counts_of(std::span<const int> codes) {
    std::unordered_map<int, std::uint64_t> freq;
    freq.reserve(codes.size());
    for (int c : codes) freq[c]++;
    std::vector<std::uint64_t> counts;
    counts.reserve(freq.size());
    for (const auto& [code, n] : freq) counts.push_back(n);
    return counts;
}

}  // namespace

double shannon_entropy(const Histogram& hist) {
    return entropy_from_counts(hist.counts);
}

double entropy_of_codes(std::span<const int> codes) {
    if (codes.empty()) fail(Err::EmptyInput, "entropy of an empty code sequence");
    return entropy_from_counts(counts_of(codes));
}

std::vector<int> compose_codes(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        fail(Err::ShapeMismatch, "compose_codes inputs differ in length");
    }
    std::unordered_map<std::uint64_t, int> ids;
    ids.reserve(a.size());
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a[i])) << 32) |
                            static_cast<std::uint32_t>(b[i]);
        auto [it, fresh] = ids.try_emplace(key, static_cast<int>(ids.size()));
        (void)fresh;
        out[i] = it->second;
    }
    return out;
}

double mutual_information(std::span<const int> a, std::span<const int> b) {
    if (a.empty()) fail(Err::EmptyInput, "mutual_information on empty input");
    if (a.size() != b.size()) {
        fail(Err::ShapeMismatch, "mutual_information inputs differ in length");
    }
    double h_a = entropy_of_codes(a);
    double h_b = entropy_of_codes(b);
    std::vector<int> joint = compose_codes(a, b);
    double h_ab = entropy_of_codes(joint);
    double mi = h_a + h_b - h_ab;
    return mi < 0.0 ? 0.0 : mi;
}

double conditional_mutual_information(std::span<const int> f, std::span<const int> y,
                                      const std::vector<std::vector<int>>& given) {
    if (f.empty()) fail(Err::EmptyInput, "conditional MI on empty input");
    if (f.size() != y.size()) {
        fail(Err::ShapeMismatch, "conditional MI inputs differ in length");
    }
    if (given.empty()) return mutual_information(f, y);

    std::vector<int> z(given[0].size());
    for (std::size_t i = 0; i < given.size(); ++i) {
        if (given[i].size() != f.size()) {
            fail(Err::ShapeMismatch, "conditioning column length mismatch");
        }
        z = (i == 0) ? given[0] : compose_codes(z, given[i]);
    }
    double h_z = entropy_of_codes(z);
    std::vector<int> fz = compose_codes(f, z);
    std::vector<int> yz = compose_codes(y, z);
    std::vector<int> fyz = compose_codes(fz, y);
    double cmi = entropy_of_codes(fz) + entropy_of_codes(yz) - h_z - entropy_of_codes(fyz);
    return cmi < 0.0 ? 0.0 : cmi;
}

FeatureMatrix quantize_features(const FeatureMatrix& x, std::size_t bins, BinScheme scheme) {
    x.validate("quantize_features input");
    if (x.rows == 0 || x.cols == 0) fail(Err::EmptyInput, "quantize_features on empty matrix");
    if (bins < 2) fail(Err::InvalidBins, "bins must be >= 2");

    FeatureMatrix coded(x.rows, x.cols);
    coded.col_names = x.col_names;
    std::vector<double> col(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        for (std::size_t r = 0; r < x.rows; ++r) col[r] = x.at(r, c);
        if (scheme == BinScheme::EqualWidth) {
            auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
            double lo = *lo_it, hi = *hi_it;
            for (std::size_t r = 0; r < x.rows; ++r) {
                int code = 0;
                if (hi > lo) {
                    double t = (col[r] - lo) / (hi - lo) * static_cast<double>(bins);
                    code = static_cast<int>(t);
                    if (code >= static_cast<int>(bins)) code = static_cast<int>(bins) - 1;
                    if (code < 0) code = 0;
                }
                coded.at(r, c) = static_cast<double>(code);
            }
        } else {
            std::vector<double> sorted(col);
            std::sort(sorted.begin(), sorted.end());
            std::vector<double> edges;
            edges.reserve(bins - 1);
            const auto n = static_cast<double>(x.rows);
            for (std::size_t j = 1; j < bins; ++j) {
                // nearest-rank quantile at q = j / bins
                auto rank = static_cast<std::size_t>(
                    std::ceil(static_cast<double>(j) / static_cast<double>(bins) * n));
                if (rank == 0) rank = 1;
                edges.push_back(sorted[rank - 1]);
            }
            for (std::size_t r = 0; r < x.rows; ++r) {
                int code = 0;
                for (double e : edges) {
                    if (col[r] > e) ++code;  // ties stay in the lower bin
                }
                coded.at(r, c) = static_cast<double>(code);
            }
        }
    }
    return coded;
}

std::vector<int> column_codes(const FeatureMatrix& coded, std::size_t col) {
    if (col >= coded.cols) fail(Err::ShapeMismatch, "column index out of range");
    std::vector<int> out(coded.rows);
    for (std::size_t r = 0; r < coded.rows; ++r) {
        double v = coded.at(r, col);
        int code = static_cast<int>(std::llround(v));
        if (static_cast<double>(code) != v) {
            fail(Err::InvalidMetric, "matrix is not integer-coded");
        }
        out[r] = code;
    }
    return out;
}

MetricValue balanced_accuracy(const LabelVector& y_true, const LabelVector& y_pred) {
    y_true.validate("y_true");
    y_pred.validate("y_pred");
    if (y_true.size() != y_pred.size()) {
        fail(Err::ShapeMismatch, "prediction/label length mismatch");
    }
    if (y_true.size() == 0) fail(Err::EmptyInput, "balanced_accuracy on empty labels");

    auto k = static_cast<std::size_t>(y_true.n_classes);
    std::vector<std::uint64_t> support(k, 0), hits(k, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        auto c = static_cast<std::size_t>(y_true.labels[i]);
        support[c]++;
        if (y_pred.labels[i] == y_true.labels[i]) hits[c]++;
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (support[c] == 0) {
            fail(Err::DegenerateLabels,
                 "class " + std::to_string(c) + " absent from y_true");
        }
        acc += static_cast<double>(hits[c]) / static_cast<double>(support[c]);
    }
    return {acc / static_cast<double>(k), Direction::HigherIsBetter};
}

double pairwise_distance(std::span<const double> a, std::span<const double> b,
                         DistanceMetric metric) {
    if (a.size() != b.size()) fail(Err::ShapeMismatch, "distance on unequal lengths");
    if (a.empty()) fail(Err::EmptyInput, "distance on empty vectors");
    const auto& k = kern::active();
    if (metric == DistanceMetric::Euclidean) {
        return std::sqrt(k.sq_l2(a.data(), b.data(), a.size()));
    }
    return k.l1(a.data(), b.data(), a.size());
}

}  // namespace mlrm
