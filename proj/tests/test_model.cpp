#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "mlrm/model.hpp"
#include "mlrm/rng.hpp"

using namespace mlrm;

namespace {

// three well-separated gaussian blobs
void make_blobs(std::size_t per_class, std::uint64_t seed, FeatureMatrix& x, LabelVector& y) {
    Rng rng(seed);
    const double cx[3] = {0.0, 4.0, -4.0};
    const double cy[3] = {0.0, 4.0, 4.0};
    x = FeatureMatrix(per_class * 3, 2);
    y.labels.clear();
    y.n_classes = 3;
    std::size_t r = 0;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i, ++r) {
            x.at(r, 0) = cx[c] + 0.6 * rng.normal();
            x.at(r, 1) = cy[c] + 0.6 * rng.normal();
            y.labels.push_back(c);
        }
    }
}

void make_xor(std::size_t per_cluster, std::uint64_t seed, FeatureMatrix& x, LabelVector& y) {
    Rng rng(seed);
    x = FeatureMatrix(per_cluster * 4, 2);
    y.labels.clear();
    y.n_classes = 2;
    const double sx[4] = {1.0, -1.0, 1.0, -1.0};
    const double sy[4] = {1.0, -1.0, -1.0, 1.0};
    const int lab[4] = {0, 0, 1, 1};
    std::size_t r = 0;
    for (int q = 0; q < 4; ++q) {
        for (std::size_t i = 0; i < per_cluster; ++i, ++r) {
            x.at(r, 0) = sx[q] + 0.15 * rng.normal();
            x.at(r, 1) = sy[q] + 0.15 * rng.normal();
            y.labels.push_back(lab[q]);
        }
    }
}

}  // namespace

TEST_CASE("parameter layout and Glorot initialization") {
    MlpSpec spec;
    spec.layer_sizes = {4, 6, 3};
    spec.activation = Activation::Tanh;
    spec.seed = 2024;

    CHECK(weight_count(spec) == 42);
    CHECK(param_count(spec) == 51);

    auto p = init_params(spec);
    CHECK(p.values.size() == 51);
    CHECK(p.layout == std::vector<std::size_t>{0, 24, 42, 48});
    for (std::size_t i = 1; i < p.layout.size(); ++i) CHECK(p.layout[i] > p.layout[i - 1]);

    double a1 = std::sqrt(6.0 / 10.0);
    double a2 = std::sqrt(6.0 / 9.0);
    for (std::size_t i = 0; i < 24; ++i) CHECK(std::fabs(p.values[i]) <= a1);
    for (std::size_t i = 24; i < 42; ++i) CHECK(std::fabs(p.values[i]) <= a2);
    for (std::size_t i = 42; i < 51; ++i) CHECK(p.values[i] == 0.0);

    auto q = init_params(spec);
    CHECK(p.values == q.values);
    spec.seed = 2025;
    CHECK(init_params(spec).values != p.values);
}

TEST_CASE("training is deterministic and reduces the loss") {
    FeatureMatrix x;
    LabelVector y;
    make_blobs(60, 7, x, y);

    MlpSpec spec;
    spec.layer_sizes = {2, 16, 3};
    spec.seed = 11;
    spec.epochs = 25;

    TrainLog log1, log2;
    auto p1 = train_mlp(spec, x, y, &log1);
    auto p2 = train_mlp(spec, x, y, &log2);
    CHECK(p1.values == p2.values);
    CHECK(log1.epoch_loss == log2.epoch_loss);
    CHECK(log1.epoch_loss.back() < log1.epoch_loss.front());

    auto acc = evaluate_model(spec, p1, x, y);
    CHECK(acc.value >= 0.95);
}

TEST_CASE("analytic gradients match central differences") {
    Rng rng(5);
    FeatureMatrix x(5, 4);
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    LabelVector y{{0, 1, 2, 0, 1}, 3};

    MlpSpec spec;
    spec.layer_sizes = {4, 6, 3};
    spec.activation = Activation::Tanh;
    spec.seed = 321;

    auto params = init_params(spec);
    auto grad = loss_gradient(spec, params, x, y);
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < params.values.size(); ++i) {
        ParamVector plus = params, minus = params;
        plus.values[i] += h;
        minus.values[i] -= h;
        double numeric = (loss_value(spec, plus, x, y) - loss_value(spec, minus, x, y)) / (2 * h);
        double rel = std::fabs(grad[i] - numeric) /
                     std::max(1e-8, std::fabs(grad[i]) + std::fabs(numeric));
        worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("zero parameters predict the lowest class everywhere") {
    MlpSpec spec;
    spec.layer_sizes = {3, 4, 2};
    auto zeros = zero_params(spec);
    FeatureMatrix x(5, 3);
    Rng rng(1);
    for (auto& v : x.data) v = rng.normal();
    auto preds = predict(spec, zeros, x);
    for (int p : preds) CHECK(p == 0);
}

TEST_CASE("pruning masks zero weights for free") {
    MlpSpec spec;
    spec.layer_sizes = {2, 4, 2};
    spec.seed = 9;
    auto params = zero_params(spec);
    // half of the 16 weights get a strong value, half stay exactly zero
    Rng rng(4);
    for (std::size_t i = 0; i < 16; i += 2) {
        params.values[i] = (i % 4 == 0 ? 1.0 : -1.0) * rng.uniform(0.5, 1.0);
    }
    params.values[16] = 0.1;  // a bias, never maskable

    FeatureMatrix x(20, 2);
    LabelVector y;
    y.n_classes = 2;
    for (std::size_t r = 0; r < 20; ++r) {
        x.at(r, 0) = (r < 10 ? 1.0 : -1.0);
        x.at(r, 1) = (r < 10 ? 1.0 : -1.0);
        y.labels.push_back(r < 10 ? 0 : 1);
    }

    auto outcome = l1_prune_search(spec, params, x, y, 0.01, 0.0);
    // 8 zero weights out of 22 parameters must be masked at minimum
    CHECK(outcome.mask.sparsity >= 8.0 / 22.0 - 1e-12);
    CHECK(outcome.acc_pruned >= outcome.acc_base);
    for (std::size_t i = 16; i < 22; ++i) CHECK(outcome.mask.keep[i] == 1);

    auto masked = apply_mask(params, outcome.mask);
    CHECK(evaluate_model(spec, masked, x, y).value == outcome.acc_pruned);
}

TEST_CASE("prune search returns the largest passing sparsity step") {
    FeatureMatrix x;
    LabelVector y;
    make_blobs(40, 3, x, y);
    MlpSpec spec;
    spec.layer_sizes = {2, 8, 3};
    spec.seed = 13;
    spec.epochs = 30;
    auto params = train_mlp(spec, x, y);
    auto outcome = l1_prune_search(spec, params, x, y, 0.05, 0.01);

    double base = evaluate_model(spec, params, x, y).value;
    std::size_t weights = weight_count(spec);
    auto masked_count = static_cast<std::size_t>(
        std::llround(outcome.mask.sparsity * static_cast<double>(param_count(spec))));
    double f = static_cast<double>(masked_count) / static_cast<double>(weights);

    // the next grid step must fail (or fall off the grid)
    double f_next = f + 0.05;
    if (f_next < 1.0 - 1e-12) {
        std::vector<std::size_t> order(weights);
        for (std::size_t i = 0; i < weights; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::fabs(params.values[a]) < std::fabs(params.values[b]);
        });
        auto target = static_cast<std::size_t>(std::llround(f_next * static_cast<double>(weights)));
        ParamVector more = params;
        for (std::size_t i = 0; i < target && i < weights; ++i) more.values[order[i]] = 0.0;
        CHECK(evaluate_model(spec, more, x, y).value < base - 0.01);
    }
}

TEST_CASE("overparameterization redundancy in both modes") {
    MetricValue same{0.981, Direction::HigherIsBetter};
    auto removed = overparam_redundancy(same, same, OverparamMode::Removed);
    CHECK(removed.r == 1.0);  // exact
    CHECK(removed.interpretation == Interpretation::FullyRedundantNeutral);

    auto hurt = overparam_redundancy({0.981, Direction::HigherIsBetter},
                                     {0.973, Direction::HigherIsBetter},
                                     OverparamMode::Removed);
    CHECK(hurt.r == doctest::Approx(1.0 - 0.008 / 0.981).epsilon(1e-9));
    CHECK(hurt.interpretation == Interpretation::NotFullyRedundant);

    auto added = overparam_redundancy({0.837, Direction::HigherIsBetter},
                                      {0.981, Direction::HigherIsBetter},
                                      OverparamMode::Added);
    CHECK(added.r == doctest::Approx(1.0 - 0.144 / 0.837).epsilon(1e-9));

    CHECK_THROWS_AS(overparam_redundancy({0.5, Direction::HigherIsBetter},
                                         {0.5, Direction::LowerIsBetter},
                                         OverparamMode::Added),
                    Error);
}

TEST_CASE("capacity search picks the smallest adequate width") {
    FeatureMatrix x;
    LabelVector y;
    make_xor(80, 17, x, y);

    MlpSpec tmpl;
    tmpl.layer_sizes = {2, 8, 2};
    tmpl.activation = Activation::Tanh;
    tmpl.seed = 5;
    tmpl.epochs = 120;
    tmpl.learning_rate = 0.1;

    auto res = capacity_search(x, y, {1, 4, 16}, tmpl, 0.02, {0.6, 0.2, 0.2}, 99);
    REQUIRE(res.width_accuracy.size() == 3);
    // one hidden unit cannot express xor; four can
    CHECK(res.width_accuracy[0].second < 0.9);
    CHECK(res.width_accuracy[1].second >= 0.95);
    CHECK(res.chosen_width == 4);

    CHECK_THROWS_AS(capacity_search(x, y, {}, tmpl, 0.02, {0.6, 0.2, 0.2}, 99), Error);
    CHECK_THROWS_AS(capacity_search(x, y, {4, 4}, tmpl, 0.02, {0.6, 0.2, 0.2}, 99), Error);
}

TEST_CASE("ensemble drop redundancy and vote ties") {
    MlpSpec spec;
    spec.layer_sizes = {2, 2, 2};

    Submodule zero{"zero", spec, zero_params(spec)};  // predicts class 0
    Submodule one{"one", spec, zero_params(spec)};    // rigged to class 1
    one.params.values[param_count(spec) - 1] = 10.0;  // last output bias

    FeatureMatrix x(4, 2);
    Rng rng(2);
    for (auto& v : x.data) v = rng.normal();
    LabelVector y{{0, 0, 1, 1}, 2};

    // two members, one votes 0 and one votes 1: tie resolves to class 0
    auto tie = submodular_perf_redundancy({zero, one}, "one", x, y);
    CHECK(tie.acc_full == 0.5);      // everything predicted 0
    CHECK(tie.acc_without == 0.5);   // only the zero-voter remains
    CHECK(tie.score.r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tie.score.r == doctest::Approx(1.0 - tie.raw_drop).epsilon(1e-15));

    Submodule third{"third", spec, zero_params(spec)};
    auto drop0 = submodular_perf_redundancy({zero, one, third}, "one", x, y);
    CHECK(drop0.acc_full == 0.5);

    CHECK_THROWS_AS(submodular_perf_redundancy({zero, one}, "ghost", x, y), Error);
    CHECK_THROWS_AS(submodular_perf_redundancy({zero}, "zero", x, y), Error);
}

TEST_CASE("parameter distance requires matching architectures") {
    MlpSpec spec;
    spec.layer_sizes = {2, 2, 2};
    Submodule a{"a", spec, zero_params(spec)};
    Submodule b{"b", spec, zero_params(spec)};
    b.params.values[0] = 3.0;
    b.params.values[1] = 4.0;
    CHECK(submodule_param_distance(a, b) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(submodule_param_distance(a, a) == 0.0);

    MlpSpec other;
    other.layer_sizes = {2, 3, 2};
    Submodule c{"c", other, zero_params(other)};
    try {
        submodule_param_distance(a, c);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::IncomparableSubmodules);
    }
}

TEST_CASE("mlpk save/load round trip is exact") {
    MlpSpec spec;
    spec.layer_sizes = {3, 5, 2};
    spec.activation = Activation::Tanh;
    spec.seed = 77;
    spec.learning_rate = 0.01;
    spec.epochs = 12;
    spec.batch_size = 8;
    auto params = init_params(spec);

    const char* path = "roundtrip.mlpk";
    save_params(path, spec, params);
    auto [spec2, params2] = load_params(path);
    CHECK(spec2.layer_sizes == spec.layer_sizes);
    CHECK(spec2.activation == spec.activation);
    CHECK(spec2.seed == spec.seed);
    CHECK(spec2.learning_rate == spec.learning_rate);
    CHECK(params2.values == params.values);
    CHECK(params2.layout == params.layout);
    std::remove(path);

    CHECK_THROWS_AS(load_params("does/not/exist.mlpk"), Error);

    std::FILE* f = std::fopen("garbage.mlpk", "wb");
    std::fputs("not json at all\n", f);
    std::fclose(f);
    try {
        load_params("garbage.mlpk");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::FormatError);
    }
    std::remove("garbage.mlpk");
}

TEST_CASE("stratified split covers every class in every part") {
    LabelVector y;
    y.n_classes = 3;
    for (int i = 0; i < 60; ++i) y.labels.push_back(0);
    for (int i = 0; i < 30; ++i) y.labels.push_back(1);
    for (int i = 0; i < 10; ++i) y.labels.push_back(2);

    auto parts = split_dataset(y, {0.8, 0.1, 0.1}, 42);
    CHECK(parts.train.size() + parts.val.size() + parts.test.size() == 100);

    std::vector<char> seen(100, 0);
    for (auto idx : parts.train) seen[idx]++;
    for (auto idx : parts.val) seen[idx]++;
    for (auto idx : parts.test) seen[idx]++;
    for (char s : seen) CHECK(s == 1);

    for (const auto* part : {&parts.train, &parts.val, &parts.test}) {
        std::vector<int> counts(3, 0);
        for (auto idx : *part) counts[static_cast<std::size_t>(y.labels[idx])]++;
        for (int c : counts) CHECK(c >= 1);
    }

    auto again = split_dataset(y, {0.8, 0.1, 0.1}, 42);
    CHECK(again.train == parts.train);

    LabelVector tiny{{0, 0, 1}, 2};
    CHECK_THROWS_AS(split_dataset(tiny, {0.8, 0.1, 0.1}, 1), Error);
    CHECK_THROWS_AS(split_dataset(y, {0.9, 0.2, 0.1}, 1), Error);
}

TEST_CASE("training data validation") {
    MlpSpec spec;
    spec.layer_sizes = {2, 4, 2};
    FeatureMatrix x(6, 3);  // wrong width
    LabelVector y{{0, 1, 0, 1, 0, 1}, 2};
    CHECK_THROWS_AS(train_mlp(spec, x, y), Error);

    MlpSpec bad;
    bad.layer_sizes = {2};
    CHECK_THROWS_AS(bad.validate(), Error);
}
