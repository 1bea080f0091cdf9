#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlrm/metrics.hpp"
#include "mlrm/rng.hpp"

using namespace mlrm;

TEST_CASE("redundancy_index reproduces the two reference computations") {
    // Accuracy 0.981 without the extra sensor, 0.973 with it.
    auto r1 = redundancy_index({0.981, Direction::HigherIsBetter},
                               {0.973, Direction::HigherIsBetter});
    CHECK(r1.r == doctest::Approx(1.0081549439347604).epsilon(1e-12));
    CHECK(r1.interpretation == Interpretation::FullyRedundantHarmful);

    // Min-entropy 0.294 at the coarse size, 0.245 after adding resolution.
    auto r2 = redundancy_index({0.294, Direction::LowerIsBetter},
                               {0.245, Direction::LowerIsBetter});
    CHECK(r2.r == doctest::Approx(1.0 - 0.049 / 0.294).epsilon(1e-9));
    CHECK(r2.interpretation == Interpretation::NotFullyRedundant);
}

TEST_CASE("redundancy_index identity and error cases") {
    auto same = redundancy_index({0.5, Direction::HigherIsBetter},
                                 {0.5, Direction::HigherIsBetter});
    CHECK(same.r == 1.0);
    CHECK(same.interpretation == Interpretation::FullyRedundantNeutral);

    // Zero baseline is guarded by epsilon, not an error.
    auto guarded = redundancy_index({0.0, Direction::LowerIsBetter},
                                    {0.0, Direction::LowerIsBetter});
    CHECK(guarded.r == 1.0);

    CHECK_THROWS_AS(redundancy_index({0.5, Direction::HigherIsBetter},
                                     {0.5, Direction::LowerIsBetter}),
                    Error);
    try {
        redundancy_index({0.5, Direction::HigherIsBetter}, {0.5, Direction::LowerIsBetter});
    } catch (const Error& e) {
        CHECK(e.code() == Err::DirectionMismatch);
    }
    CHECK_THROWS_AS(redundancy_index({std::nan(""), Direction::HigherIsBetter},
                                     {0.5, Direction::HigherIsBetter}),
                    Error);
}

TEST_CASE("classify_redundancy tolerance band") {
    CHECK(classify_redundancy(1.0 + 5e-10) == Interpretation::FullyRedundantNeutral);
    CHECK(classify_redundancy(1.0 - 5e-10) == Interpretation::FullyRedundantNeutral);
    CHECK(classify_redundancy(0.9) == Interpretation::NotFullyRedundant);
    CHECK(classify_redundancy(1.1) == Interpretation::FullyRedundantHarmful);
}

TEST_CASE("relative_redundancy is a plain rate ratio") {
    // 3260 defective vs 1585 defect-free out of 4845.
    double ratio = relative_redundancy(3260.0 / 4845.0, 1585.0 / 4845.0);
    CHECK(ratio == doctest::Approx(2.0567823343848580).epsilon(1e-12));
    CHECK(relative_redundancy(0.25, 0.25) == 1.0);
    try {
        relative_redundancy(0.1, 0.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::DivisionByZero);
    }
}

TEST_CASE("shannon_entropy reference values") {
    CHECK(shannon_entropy({{5}}) == 0.0);
    CHECK(shannon_entropy({{2, 2}}) == 1.0);
    CHECK(shannon_entropy({{1, 1, 1, 1}}) == 2.0);
    // counts (3,1): 2 - (3*log2 3)/4
    CHECK(shannon_entropy({{3, 1}}) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
    // permutation invariance must be exact
    CHECK(shannon_entropy({{3, 1, 7}}) == shannon_entropy({{7, 3, 1}}));
    CHECK(shannon_entropy({{0, 4, 0, 4}}) == 1.0);
    CHECK_THROWS_AS(shannon_entropy({{}}), Error);
    CHECK_THROWS_AS(shannon_entropy({{0, 0}}), Error);
}

TEST_CASE("uniform histograms reach log2(bins) exactly") {
    for (std::size_t k = 1; k <= 8; ++k) {
        Histogram h;
        h.counts.assign(std::size_t{1} << k, 3);
        CHECK(shannon_entropy(h) == static_cast<double>(k));
    }
}

TEST_CASE("mutual information identities") {
    std::vector<int> a{0, 0, 1, 1};
    std::vector<int> b{0, 1, 0, 1};
    std::vector<int> x{0, 0, 1, 1, 2, 2, 2, 1};
    std::vector<int> a8{0, 0, 1, 1, 0, 0, 1, 1};

    CHECK(mutual_information(a, b) == 0.0);          // independent
    CHECK(mutual_information(a, a) == 1.0);          // I(f,f) = H(f)
    CHECK(mutual_information(x, x) == entropy_of_codes(x));
    CHECK(mutual_information(a, b) == mutual_information(b, a));
    CHECK(mutual_information(x, a8) == mutual_information(a8, x));

    // relabeling codes changes nothing
    std::vector<int> relabeled{7, 7, -2, -2, 40, 40, 40, -2};
    CHECK(mutual_information(x, a8) == mutual_information(relabeled, a8));
}

TEST_CASE("mutual information bounds on random codes") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> a(200), b(200);
        for (auto& v : a) v = static_cast<int>(rng.below(6));
        for (auto& v : b) v = static_cast<int>(rng.below(4));
        double mi = mutual_information(a, b);
        CHECK(mi >= 0.0);
        CHECK(mi <= std::min(entropy_of_codes(a), entropy_of_codes(b)) + kNumTolerance);
    }
}

TEST_CASE("conditional MI: xor needs the conditioning variable") {
    std::vector<int> f{0, 0, 1, 1};
    std::vector<int> g{0, 1, 0, 1};
    std::vector<int> y{0, 1, 1, 0};
    CHECK(mutual_information(f, y) == 0.0);
    CHECK(conditional_mutual_information(f, y, {g}) == 1.0);
    // empty conditioning set reduces exactly to MI
    CHECK(conditional_mutual_information(f, y, {}) == mutual_information(f, y));
}

TEST_CASE("conditional MI with redundant conditioning collapses to zero") {
    // y is a function of g, so f adds nothing once g is known.
    std::vector<int> f{0, 1, 0, 1, 0, 1, 0, 1};
    std::vector<int> g{0, 0, 1, 1, 2, 2, 3, 3};
    std::vector<int> y{0, 0, 1, 1, 0, 0, 1, 1};
    CHECK(conditional_mutual_information(y, y, {y}) == 0.0);
    double cmi = conditional_mutual_information(f, y, {g});
    CHECK(cmi == doctest::Approx(0.0).epsilon(kNumTolerance));
}

TEST_CASE("equal-width quantization") {
    FeatureMatrix x(4, 1);
    x.data = {0.0, 1.0, 2.0, 3.0};
    auto coded = quantize_features(x, 2, BinScheme::EqualWidth);
    CHECK(column_codes(coded, 0) == std::vector<int>{0, 0, 1, 1});

    FeatureMatrix flat(3, 1);
    flat.data = {5.0, 5.0, 5.0};
    auto c2 = quantize_features(flat, 4, BinScheme::EqualWidth);
    CHECK(column_codes(c2, 0) == std::vector<int>{0, 0, 0});

    CHECK_THROWS_AS(quantize_features(x, 1, BinScheme::EqualWidth), Error);
    CHECK_THROWS_AS(quantize_features(FeatureMatrix{}, 4, BinScheme::EqualWidth), Error);
}

TEST_CASE("quantile quantization balances a continuous column") {
    Rng rng(5);
    FeatureMatrix x(1000, 1);
    for (auto& v : x.data) v = rng.normal();
    auto coded = quantize_features(x, 4, BinScheme::Quantile);
    auto codes = column_codes(coded, 0);
    std::vector<int> counts(4, 0);
    for (int c : codes) {
        REQUIRE(c >= 0);
        REQUIRE(c < 4);
        counts[static_cast<std::size_t>(c)]++;
    }
    for (int c : counts) {
        CHECK(c >= 230);
        CHECK(c <= 270);
    }
}

TEST_CASE("quantile quantization sends ties to the lower bin") {
    FeatureMatrix x(4, 1);
    x.data = {1.0, 1.0, 1.0, 2.0};
    auto codes = column_codes(quantize_features(x, 2, BinScheme::Quantile), 0);
    CHECK(codes == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("balanced accuracy averages per-class recall") {
    LabelVector y_true{{0, 0, 1, 1, 1}, 2};
    LabelVector y_pred{{0, 1, 1, 1, 0}, 2};
    auto m = balanced_accuracy(y_true, y_pred);
    CHECK(m.value == doctest::Approx((0.5 + 2.0 / 3.0) / 2.0).epsilon(1e-14));
    CHECK(m.direction == Direction::HigherIsBetter);

    auto perfect = balanced_accuracy(y_true, y_true);
    CHECK(perfect.value == 1.0);

    // skewed predictions score 0.5 on a skewed binary problem
    LabelVector always0{{0, 0, 0, 0, 0}, 2};
    CHECK(balanced_accuracy(y_true, always0).value == 0.5);

    LabelVector missing{{0, 0, 0}, 2};
    LabelVector pred3{{0, 0, 0}, 2};
    try {
        balanced_accuracy(missing, pred3);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::DegenerateLabels);
    }
}

TEST_CASE("pairwise distances") {
    std::vector<double> a{0.0, 0.0};
    std::vector<double> b{3.0, 4.0};
    CHECK(pairwise_distance(a, b, DistanceMetric::Euclidean) == doctest::Approx(5.0));
    CHECK(pairwise_distance(a, b, DistanceMetric::Manhattan) == doctest::Approx(7.0));
    std::vector<double> c{1.0};
    CHECK_THROWS_AS(pairwise_distance(a, c, DistanceMetric::Euclidean), Error);
}
