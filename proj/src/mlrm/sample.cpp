#include "mlrm/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "mlrm/rng.hpp"

namespace mlrm {

double avg_pairwise_distance(const FeatureMatrix& x, DistanceMetric metric,
                             std::uint64_t max_pairs, std::uint64_t seed) {
    x.validate("avg_pairwise_distance input");
    const std::size_t n = x.rows;
    if (n < 2) fail(Err::TooFewSamples, "avg_pairwise_distance needs >= 2 samples");
    if (max_pairs == 0) fail(Err::InvalidSize, "max_pairs must be positive");

    const auto total_pairs =
        static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
    if (total_pairs <= max_pairs) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                sum += pairwise_distance(x.row(i), x.row(j), metric);
            }
        }
        return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
    }

    Rng rng(seed);
    double sum = 0.0;
    for (std::uint64_t p = 0; p < max_pairs; ++p) {
        std::size_t i = rng.index(n);
        std::size_t j = rng.index(n - 1);
        if (j >= i) ++j;
        sum += pairwise_distance(x.row(i), x.row(j), metric);
    }
    return sum / static_cast<double>(max_pairs);
}

CoverageFrame fit_coverage_frame(const FeatureMatrix& x0, std::size_t dims, std::size_t bins) {
    x0.validate("coverage frame fit data");
    if (x0.rows == 0 || x0.cols == 0) fail(Err::EmptyInput, "coverage frame on empty data");
    if (bins < 2) fail(Err::InvalidBins, "coverage frame needs >= 2 bins per dim");
    if (dims < 1 || dims > 3) fail(Err::InvalidSize, "coverage frame dims must be 1..3");

    CoverageFrame frame;
    frame.bins = bins;

    FeatureMatrix projected;
    if (x0.cols <= 3) {
        frame.dims = std::min(dims, x0.cols);
        projected = FeatureMatrix(x0.rows, frame.dims);
        for (std::size_t r = 0; r < x0.rows; ++r)
            for (std::size_t c = 0; c < frame.dims; ++c) projected.at(r, c) = x0.at(r, c);
    } else {
        std::size_t k = std::min({dims, x0.cols, x0.rows > 1 ? x0.rows - 1 : std::size_t{1}});
        frame.dims = k;
        frame.projection = pca_fit(x0, k);
        projected = pca_transform(*frame.projection, x0);
    }

    frame.lo.assign(frame.dims, 0.0);
    frame.hi.assign(frame.dims, 0.0);
    for (std::size_t c = 0; c < frame.dims; ++c) {
        double lo = projected.at(0, c), hi = lo;
        for (std::size_t r = 1; r < projected.rows; ++r) {
            lo = std::min(lo, projected.at(r, c));
            hi = std::max(hi, projected.at(r, c));
        }
        frame.lo[c] = lo;
        frame.hi[c] = hi;
        if (hi <= lo) frame.degenerate = true;
    }
    return frame;
}

std::vector<int> CoverageFrame::cell_codes(const FeatureMatrix& x) const {
    x.validate("coverage frame input");
    FeatureMatrix projected;
    if (projection) {
        projected = pca_transform(*projection, x);
    } else {
        if (x.cols < dims) fail(Err::ShapeMismatch, "coverage frame input has too few columns");
        projected = FeatureMatrix(x.rows, dims);
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t c = 0; c < dims; ++c) projected.at(r, c) = x.at(r, c);
    }

    std::vector<int> codes(x.rows);
    const auto b = static_cast<long>(bins);
    for (std::size_t r = 0; r < x.rows; ++r) {
        long cell = 0;
        for (std::size_t c = 0; c < dims; ++c) {
            long idx = 0;
            if (hi[c] > lo[c]) {
                double t = (projected.at(r, c) - lo[c]) / (hi[c] - lo[c]);
                idx = static_cast<long>(std::floor(t * static_cast<double>(bins)));
                idx = std::clamp(idx, 0L, b - 1);
            }
            cell = cell * b + idx;
        }
        codes[r] = static_cast<int>(cell);
    }
    return codes;
}

double grid_coverage(const FeatureMatrix& x, const CoverageFrame& frame) {
    if (x.rows == 0) fail(Err::EmptyInput, "grid_coverage on empty data");
    auto codes = frame.cell_codes(x);
    std::unordered_set<int> occupied(codes.begin(), codes.end());
    double cells = std::pow(static_cast<double>(frame.bins), static_cast<double>(frame.dims));
    return static_cast<double>(occupied.size()) / cells;
}

namespace {

FeatureMatrix concat_rows(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.cols != b.cols) fail(Err::ShapeMismatch, "batch column count differs from corpus");
    FeatureMatrix out(a.rows + b.rows, a.cols);
    out.col_names = a.col_names;
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<long>(a.data.size()));
    return out;
}

double dataset_entropy(const FeatureMatrix& x, const CoverageFrame& frame) {
    return entropy_of_codes(frame.cell_codes(x));
}

}  // namespace

HolisticResult holistic_redundancy(const FeatureMatrix& x0, const FeatureMatrix& batch,
                                   HolisticMeasure measure, const HolisticParams& params) {
    x0.validate("holistic base corpus");
    batch.validate("holistic batch");
    if (x0.rows == 0) fail(Err::EmptyInput, "holistic base corpus is empty");
    if (batch.rows == 0) fail(Err::EmptyInput, "holistic batch is empty");

    FeatureMatrix merged = concat_rows(x0, batch);
    HolisticResult res;
    res.measure = measure;

    switch (measure) {
        case HolisticMeasure::Entropy: {
            auto frame = fit_coverage_frame(x0, params.entropy_dims, params.entropy_bins);
            res.p_before = dataset_entropy(x0, frame);
            res.p_after = dataset_entropy(merged, frame);
            break;
        }
        case HolisticMeasure::Diversity: {
            res.p_before = avg_pairwise_distance(x0, params.metric, params.max_pairs, params.seed);
            res.p_after =
                avg_pairwise_distance(merged, params.metric, params.max_pairs, params.seed);
            break;
        }
        case HolisticMeasure::Coverage: {
            auto frame = fit_coverage_frame(x0, params.coverage_dims, params.coverage_bins);
            res.p_before = grid_coverage(x0, frame);
            res.p_after = grid_coverage(merged, frame);
            break;
        }
    }
    res.score = redundancy_index({res.p_before, Direction::HigherIsBetter},
                                 {res.p_after, Direction::HigherIsBetter});
    return res;
}

GroupStats group_stats(const SubgroupPartition& partition) {
    if (partition.group_ids.empty()) fail(Err::EmptyInput, "group_stats on empty partition");
    if (partition.group_names.empty()) fail(Err::EmptyInput, "group_stats needs group names");

    const std::size_t g = partition.group_names.size();
    GroupStats stats;
    stats.names = partition.group_names;
    stats.counts.assign(g, 0);
    for (int id : partition.group_ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= g) {
            fail(Err::InvalidMetric, "group id " + std::to_string(id) + " out of range");
        }
        stats.counts[static_cast<std::size_t>(id)]++;
    }
    const auto n = static_cast<double>(partition.group_ids.size());
    stats.rates.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        stats.rates[i] = static_cast<double>(stats.counts[i]) / n;
    }
    stats.disparity = FeatureMatrix(g, g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            stats.disparity.at(i, j) = relative_redundancy(stats.rates[i], stats.rates[j]);
        }
    }
    return stats;
}

std::vector<std::size_t> greedy_diverse_subset(const FeatureMatrix& x, std::size_t target,
                                               DistanceMetric metric, std::uint64_t seed) {
    x.validate("greedy_diverse_subset input");
    const std::size_t n = x.rows;
    if (n == 0) fail(Err::EmptyInput, "greedy_diverse_subset on empty data");
    if (target < 1 || target > n) {
        fail(Err::InvalidSize, "target size must be in [1, N]");
    }

    Rng rng(seed);
    auto pick_tied = [&](const std::vector<std::size_t>& tied) {
        return tied.size() == 1 ? tied[0] : tied[rng.index(tied.size())];
    };

    // seed sample: nearest to the centroid
    std::vector<double> centroid(x.cols, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t c = 0; c < x.cols; ++c) centroid[c] += row[c];
    }
    for (auto& v : centroid) v /= static_cast<double>(n);

    std::vector<std::size_t> tied;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) {
        double d = pairwise_distance(x.row(r), centroid, metric);
        if (d < best) {
            best = d;
            tied.assign(1, r);
        } else if (d == best) {
            tied.push_back(r);
        }
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(target);
    std::vector<char> in_set(n, 0);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());

    std::size_t first = pick_tied(tied);
    chosen.push_back(first);
    in_set[first] = 1;

    while (chosen.size() < target) {
        std::size_t last = chosen.back();
        for (std::size_t r = 0; r < n; ++r) {
            if (in_set[r]) continue;
            double d = pairwise_distance(x.row(r), x.row(last), metric);
            min_dist[r] = std::min(min_dist[r], d);
        }
        tied.clear();
        double far = -1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (in_set[r]) continue;
            if (min_dist[r] > far) {
                far = min_dist[r];
                tied.assign(1, r);
            } else if (min_dist[r] == far) {
                tied.push_back(r);
            }
        }
        std::size_t next = pick_tied(tied);
        chosen.push_back(next);
        in_set[next] = 1;
    }
    return chosen;
}

SmoteResult smote_oversample(const FeatureMatrix& x, const LabelVector& y,
                             double target_ratio, std::size_t k, std::uint64_t seed) {
    x.validate("smote input");
    y.validate("smote labels");
    if (x.rows != y.size()) fail(Err::ShapeMismatch, "smote: rows and labels differ");
    if (x.rows == 0) fail(Err::EmptyInput, "smote on empty data");
    if (k < 1) fail(Err::InvalidK, "smote needs k >= 1");
    if (!(target_ratio > 0.0)) fail(Err::InvalidConfig, "target_ratio must be positive");
    if (y.n_classes < 2) fail(Err::DegenerateLabels, "smote needs >= 2 classes");

    auto counts = y.class_counts();
    std::size_t minority = 0, majority = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] < counts[minority]) minority = c;
        if (counts[c] > counts[majority]) majority = c;
    }
    if (counts[minority] == 0) fail(Err::DegenerateLabels, "smote: a class has no samples");

    SmoteResult res{x, y, 0};
    const double current =
        static_cast<double>(counts[minority]) / static_cast<double>(counts[majority]);
    if (current >= target_ratio) return res;  // nothing to balance

    if (counts[minority] < 2) {
        fail(Err::CannotInterpolate, "smote: minority class has a single sample");
    }

    std::vector<std::size_t> member;
    member.reserve(counts[minority]);
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (y.labels[r] == static_cast<int>(minority)) member.push_back(r);
    }
    const std::size_t m_count = member.size();
    const std::size_t k_eff = std::min(k, m_count - 1);

    const double need =
        std::ceil(target_ratio * static_cast<double>(counts[majority]));
    auto n_new = static_cast<std::size_t>(need) - counts[minority];

    // k nearest minority neighbours, computed once per base point on demand
    std::unordered_map<std::size_t, std::vector<std::size_t>> knn;
    auto neighbours = [&](std::size_t a) -> const std::vector<std::size_t>& {
        auto it = knn.find(a);
        if (it != knn.end()) return it->second;
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(m_count - 1);
        for (std::size_t b : member) {
            if (b == a) continue;
            dist.emplace_back(pairwise_distance(x.row(a), x.row(b), DistanceMetric::Euclidean), b);
        }
        std::sort(dist.begin(), dist.end());
        std::vector<std::size_t> ids(k_eff);
        for (std::size_t i = 0; i < k_eff; ++i) ids[i] = dist[i].second;
        return knn.emplace(a, std::move(ids)).first->second;
    };

    Rng rng(seed);
    res.x.data.reserve(res.x.data.size() + n_new * x.cols);
    res.y.labels.reserve(res.y.labels.size() + n_new);
    std::vector<double> fresh(x.cols);
    for (std::size_t i = 0; i < n_new; ++i) {
        std::size_t a = member[rng.index(m_count)];
        const auto& nbrs = neighbours(a);
        std::size_t b = nbrs[rng.index(nbrs.size())];
        double lambda = rng.uniform();
        const double* pa = x.row_ptr(a);
        const double* pb = x.row_ptr(b);
        for (std::size_t c = 0; c < x.cols; ++c) {
            fresh[c] = pa[c] + lambda * (pb[c] - pa[c]);
        }
        res.x.data.insert(res.x.data.end(), fresh.begin(), fresh.end());
        res.y.labels.push_back(static_cast<int>(minority));
    }
    res.x.rows += n_new;
    res.synthesized = n_new;
    return res;
}

}  // namespace mlrm
