#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chf/errors.hpp"
#include "chf/mlp.hpp"
#include "chf/random.hpp"

using namespace chf;

namespace {

LocalState random_state(Rng& rng) {
    return {rng.uniform(0.004, 0.02), rng.uniform(1000.0, 20000.0),
            rng.uniform(300.0, 6000.0), rng.uniform(-0.4, 0.8)};
}

std::vector<TrainSample> random_samples(Rng& rng, size_t n) {
    std::vector<TrainSample> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i)
        out.push_back({random_state(rng), rng.uniform(-2.0, 2.0)});
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("zero network outputs the target mean") {
    std::vector<Layer> layers(2);
    layers[0].w = Eigen::MatrixXd::Zero(4, 8);
    layers[0].b = Eigen::VectorXd::Zero(8);
    layers[1].w = Eigen::MatrixXd::Zero(8, 1);
    layers[1].b = Eigen::VectorXd::Zero(1);
    const MlpModel model(layers, Activation::kRelu);

    Standardizer st;
    st.y_mean = 1234.5;
    st.y_std = 77.0;
    CHECK(forward(model, st, {0.01, 5000.0, 2000.0, 0.1}) == 1234.5);
}

TEST_CASE("single linear layer with a unit weight passes one feature through") {
    std::vector<Layer> layers(1);
    layers[0].w = Eigen::MatrixXd::Zero(4, 1);
    layers[0].w(0, 0) = 1.0;   // picks the first feature, D_he
    layers[0].b = Eigen::VectorXd::Zero(1);
    const MlpModel model(layers, Activation::kRelu);
    const Standardizer identity;   // zero means, unit stds

    CHECK(forward(model, identity, {0.0123, 5000.0, 2000.0, 0.1}) == 0.0123);
}

TEST_CASE("batched forward equals a naive per-sample loop") {
    Rng rng(41);
    MlpModel model = MlpModel::init({4, 16, 16, 1}, Activation::kTanh, rng);

    Eigen::MatrixXd X(32, 4);
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < 4; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
    const Eigen::VectorXd fast = model.raw_batch(X);

    for (int i = 0; i < X.rows(); ++i) {
        // Hand-rolled scalar forward pass over the same parameters.
        std::vector<double> act(4);
        for (int j = 0; j < 4; ++j) act[j] = X(i, j);
        for (size_t l = 0; l < model.layers().size(); ++l) {
            const Layer& lay = model.layers()[l];
            std::vector<double> next(lay.w.cols());
            for (Eigen::Index c = 0; c < lay.w.cols(); ++c) {
                double z = lay.b(c);
                for (Eigen::Index r = 0; r < lay.w.rows(); ++r)
                    z += act[r] * lay.w(r, c);
                next[c] = (l + 1 < model.layers().size()) ? std::tanh(z) : z;
            }
            act = next;
        }
        CHECK(fast(i) == doctest::Approx(act[0]).epsilon(1e-12));
    }
}

TEST_CASE("closed-form loss and bias gradient for the zero network") {
    std::vector<Layer> layers(2);
    layers[0].w = Eigen::MatrixXd::Zero(4, 6);
    layers[0].b = Eigen::VectorXd::Zero(6);
    layers[1].w = Eigen::MatrixXd::Zero(6, 1);
    layers[1].b = Eigen::VectorXd::Zero(1);
    const MlpModel model(layers, Activation::kRelu);

    Eigen::MatrixXd X(4, 4);
    X.setRandom();
    Eigen::VectorXd y(4);
    y << 1.0, -2.0, 0.5, 0.5;   // zero-mean not required

    std::vector<Layer> grads;
    const double loss = loss_and_gradient(model, X, y, 0.0, &grads);
    CHECK(loss == doctest::Approx(y.squaredNorm() / 4.0).epsilon(1e-15));
    CHECK(grads[1].b(0) == doctest::Approx(-2.0 * y.mean()).epsilon(1e-15));
}

TEST_CASE("pure penalty gradient is exactly 2*lambda*weights") {
    Rng rng(7);
    MlpModel model = MlpModel::init({4, 5, 1}, Activation::kTanh, rng);

    Eigen::MatrixXd X(8, 4);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd y = model.raw_batch(X);   // zero data error

    const double lambda = 0.37;
    std::vector<Layer> grads;
    (void)loss_and_gradient(model, X, y, lambda, &grads);
    for (size_t l = 0; l < grads.size(); ++l) {
        CHECK((grads[l].w - 2.0 * lambda * model.layers()[l].w).norm() == 0.0);
        CHECK(grads[l].b.norm() == 0.0);
    }
}

TEST_CASE("backprop matches central finite differences on random networks") {
    const double eps = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 24; ++trial) {
        Rng rng(1000 + trial);
        // Mixed shapes and both activations, up to 3 layers of <= 16 units.
        const std::vector<std::vector<int>> shapes = {
            {4, 1}, {4, 8, 1}, {4, 16, 1}, {4, 8, 8, 1}, {4, 16, 16, 1}};
        const auto dims = shapes[trial % shapes.size()];
        const Activation act =
            trial % 3 == 0 ? Activation::kRelu : Activation::kTanh;
        MlpModel model = MlpModel::init(dims, act, rng);

        const int batch = 3 + trial % 5;
        Eigen::MatrixXd X(batch, 4);
        for (int i = 0; i < batch; ++i)
            for (int j = 0; j < 4; ++j) X(i, j) = rng.uniform(-1.5, 1.5);
        Eigen::VectorXd y(batch);
        for (int i = 0; i < batch; ++i) y(i) = rng.uniform(-1.0, 1.0);
        const double lambda = trial % 2 ? 1e-3 : 0.0;

        std::vector<Layer> grads;
        (void)loss_and_gradient(model, X, y, lambda, &grads);

        auto perturbed = [&](size_t l, bool bias, Eigen::Index i,
                             Eigen::Index j, double delta) {
            MlpModel m = model;
            if (bias)
                m.mutable_layers()[l].b(i) += delta;
            else
                m.mutable_layers()[l].w(i, j) += delta;
            return loss_and_gradient(m, X, y, lambda, nullptr);
        };
        auto check_one = [&](double analytic, size_t l, bool bias,
                             Eigen::Index i, Eigen::Index j) {
            const double hi = perturbed(l, bias, i, j, eps);
            const double lo = perturbed(l, bias, i, j, -eps);
            const double fd = (hi - lo) / (2.0 * eps);
            // Guarded relative error: the unit floor keeps components whose
            // true gradient is at roundoff scale from dividing by ~0.
            const double rel = std::abs(analytic - fd) /
                               std::max({1.0, std::abs(analytic),
                                         std::abs(fd)});
            worst = std::max(worst, rel);
        };
        for (size_t l = 0; l < grads.size(); ++l) {
            for (Eigen::Index i = 0; i < grads[l].w.rows(); ++i)
                for (Eigen::Index j = 0; j < grads[l].w.cols(); ++j)
                    check_one(grads[l].w(i, j), l, false, i, j);
            for (Eigen::Index i = 0; i < grads[l].b.size(); ++i)
                check_one(grads[l].b(i), l, true, i, 0);
        }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("training fits a noiseless linear target") {
    Rng rng(99);
    std::vector<TrainSample> data;
    for (int i = 0; i < 600; ++i) {
        const LocalState s = random_state(rng);
        data.push_back({s, 3.0 * s.g_kgm2s});   // linear in one feature
    }
    const std::vector<TrainSample> val(data.begin() + 500, data.end());
    data.resize(500);

    TrainConfig cfg;
    cfg.max_epochs = 500;
    cfg.hidden = {16};
    cfg.activation = Activation::kTanh;
    cfg.learning_rate = 0.1;
    cfg.decay = 0.997;
    cfg.seed = 3;
    const TrainResult res = train(data, val, cfg);
    CHECK(res.report.best_val_loss < 1e-3);
}

TEST_CASE("early stopping halts after patience expires") {
    Rng rng(5);
    const auto data = random_samples(rng, 200);
    const auto val = random_samples(rng, 40);

    TrainConfig cfg;
    cfg.max_epochs = 100;
    cfg.patience = 1;
    cfg.min_delta = 1e9;   // nothing can improve by this much
    cfg.seed = 11;
    const TrainResult res = train(data, val, cfg);
    CHECK(res.report.epochs_run == 2);
}

TEST_CASE("report invariants: best epoch is the argmin, lr decays exactly") {
    Rng rng(6);
    const auto data = random_samples(rng, 300);
    const auto val = random_samples(rng, 60);

    TrainConfig cfg;
    cfg.max_epochs = 40;
    cfg.seed = 17;
    const TrainResult res = train(data, val, cfg);
    const TrainReport& r = res.report;

    REQUIRE(r.epochs_run == static_cast<int>(r.loss_history.size()));
    CHECK(r.best_epoch < r.epochs_run);
    const double min_hist =
        *std::min_element(r.loss_history.begin(), r.loss_history.end());
    CHECK(r.best_val_loss == min_hist);
    CHECK(r.loss_history[r.best_epoch] == min_hist);
    CHECK(r.final_lr ==
          doctest::Approx(cfg.learning_rate *
                          std::pow(cfg.decay, r.epochs_run - 1))
              .epsilon(1e-12));
}

TEST_CASE("identical seeds produce identical weight files") {
    Rng rng(8);
    const auto data = random_samples(rng, 200);
    const auto val = random_samples(rng, 50);

    TrainConfig cfg;
    cfg.max_epochs = 15;
    cfg.seed = 42;
    const TrainResult a = train(data, val, cfg);
    const TrainResult b = train(data, val, cfg);
    save_weights(a.model, a.standardizer, "/tmp/mlp_seed_a.txt");
    save_weights(b.model, b.standardizer, "/tmp/mlp_seed_b.txt");
    CHECK(read_file("/tmp/mlp_seed_a.txt") == read_file("/tmp/mlp_seed_b.txt"));
    CHECK(read_file("/tmp/mlp_seed_a.txt").size() > 100);
}

TEST_CASE("weight file round trip preserves predictions bit-exactly") {
    Rng rng(12);
    MlpModel model = MlpModel::init({4, 16, 16, 1}, Activation::kRelu, rng);
    Standardizer st;
    st.x_mean << 0.01, 9000.0, 3000.0, 0.1;
    st.x_std << 0.004, 4500.0, 1500.0, 0.3;
    st.y_mean = 2500.0;
    st.y_std = 900.0;

    const std::string path = "/tmp/mlp_roundtrip.txt";
    save_weights(model, st, path);
    const LoadedMlp loaded = load_weights(path);

    CHECK(loaded.model.activation() == Activation::kRelu);
    for (int i = 0; i < 100; ++i) {
        const LocalState s = random_state(rng);
        CHECK(forward(model, st, s) ==
              forward(loaded.model, loaded.standardizer, s));
    }
}

TEST_CASE("weight file errors are typed and specific") {
    Rng rng(13);
    MlpModel model = MlpModel::init({4, 8, 1}, Activation::kTanh, rng);
    const std::string path = "/tmp/mlp_damaged.txt";
    save_weights(model, Standardizer{}, path);

    SUBCASE("truncated last layer reports a dimension mismatch") {
        std::string text = read_file(path);
        text.resize(text.size() / 2);
        std::ofstream(path) << text;
        try {
            (void)load_weights(path);
            FAIL("expected ModelError");
        } catch (const ModelError& e) {
            CHECK(std::string(e.what()).find("dimension mismatch") !=
                  std::string::npos);
        }
    }
    SUBCASE("unknown activation names the tag") {
        std::string text = read_file(path);
        const auto pos = text.find("tanh");
        text.replace(pos, 4, "gelu");
        std::ofstream(path) << text;
        try {
            (void)load_weights(path);
            FAIL("expected ModelError");
        } catch (const ModelError& e) {
            CHECK(std::string(e.what()).find("gelu") != std::string::npos);
        }
    }
    SUBCASE("unsupported version is rejected") {
        std::string text = read_file(path);
        text.replace(0, 5, "mlpv9");
        std::ofstream(path) << text;
        CHECK_THROWS_AS((void)load_weights(path), ModelError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_weights("/tmp/nope_no_weights.txt"),
                        InputError);
    }
}

TEST_CASE("input validation errors") {
    Rng rng(14);
    MlpModel model = MlpModel::init({4, 4, 1}, Activation::kTanh, rng);

    CHECK_THROWS_AS((void)loss_and_gradient(model, Standardizer{}, {}, 0.0,
                                            nullptr),
                    InputError);

    Eigen::MatrixXd bad(3, 7);
    bad.setZero();
    CHECK_THROWS_AS((void)model.raw_batch(bad), ModelError);

    std::vector<Layer> broken(2);
    broken[0].w = Eigen::MatrixXd::Zero(4, 6);
    broken[0].b = Eigen::VectorXd::Zero(6);
    broken[1].w = Eigen::MatrixXd::Zero(5, 1);   // should be 6 rows
    broken[1].b = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(MlpModel(broken, Activation::kTanh), ModelError);

    Rng r2(15);
    const auto tiny = random_samples(r2, 10);
    TrainConfig cfg;
    cfg.batch_size = 64;
    CHECK_THROWS_AS((void)train(tiny, tiny, cfg), InputError);
    cfg.batch_size = 4;
    CHECK_THROWS_AS((void)train(tiny, {}, cfg), InputError);
}

TEST_CASE("standardizer statistics come from the given samples") {
    std::vector<TrainSample> s;
    s.push_back({{0.01, 1000.0, 2000.0, 0.0}, 10.0});
    s.push_back({{0.03, 3000.0, 2000.0, 0.4}, 30.0});
    const Standardizer st = fit_standardizer(s);

    CHECK(st.x_mean(0) == doctest::Approx(0.02));
    CHECK(st.x_mean(1) == doctest::Approx(2000.0));
    CHECK(st.x_std(0) == doctest::Approx(0.01));       // population std
    CHECK(st.x_std(2) == 1.0);                         // constant column
    CHECK(st.y_mean == doctest::Approx(20.0));
    CHECK(st.y_std == doctest::Approx(10.0));

    const Eigen::Vector4d z = st.transform({0.03, 3000.0, 2000.0, 0.4});
    CHECK(z(0) == doctest::Approx(1.0));
    CHECK(z(2) == 0.0);
    CHECK(st.inverse_target(st.transform_target(123.4)) ==
          doctest::Approx(123.4).epsilon(1e-15));
}
