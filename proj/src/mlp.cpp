#include "chf/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "chf/errors.hpp"

namespace chf {

std::string to_string(Activation a) {
    return a == Activation::kRelu ? "relu" : "tanh";
}

Activation activation_from_string(const std::string& tag) {
    if (tag == "relu") return Activation::kRelu;
    if (tag == "tanh") return Activation::kTanh;
    throw ModelError("unknown activation '" + tag + "'");
}

Eigen::Vector4d Standardizer::transform(const LocalState& s) const {
    Eigen::Vector4d raw(s.d_he_m, s.p_kpa, s.g_kgm2s, s.x_e);
    return (raw - x_mean).cwiseQuotient(x_std);
}

Standardizer fit_standardizer(const std::vector<TrainSample>& samples) {
    if (samples.empty())
        throw InputError("mlp: cannot fit standardizer on empty sample set");
    const double n = static_cast<double>(samples.size());

    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    double y_mean = 0.0;
    for (const auto& s : samples) {
        mean += Eigen::Vector4d(s.state.d_he_m, s.state.p_kpa, s.state.g_kgm2s,
                                s.state.x_e);
        y_mean += s.y;
    }
    mean /= n;
    y_mean /= n;

    Eigen::Vector4d var = Eigen::Vector4d::Zero();
    double y_var = 0.0;
    for (const auto& s : samples) {
        const Eigen::Vector4d d =
            Eigen::Vector4d(s.state.d_he_m, s.state.p_kpa, s.state.g_kgm2s,
                            s.state.x_e) - mean;
        var += d.cwiseProduct(d);
        y_var += (s.y - y_mean) * (s.y - y_mean);
    }
    var /= n;
    y_var /= n;

    Standardizer st;
    st.x_mean = mean;
    st.x_std = var.cwiseSqrt();
    // A constant column would make transform undefined; standardize it to 0.
    for (int i = 0; i < 4; ++i)
        if (st.x_std(i) == 0.0) st.x_std(i) = 1.0;
    st.y_mean = y_mean;
    st.y_std = std::sqrt(y_var);
    if (st.y_std == 0.0) st.y_std = 1.0;
    return st;
}

// ---------------------------------------------------------------------------
// MlpModel

MlpModel::MlpModel(std::vector<Layer> layers, Activation activation)
    : layers_(std::move(layers)), activation_(activation) {
    if (layers_.empty()) throw ModelError("mlp: network has no layers");
    for (size_t l = 0; l < layers_.size(); ++l) {
        const Layer& lay = layers_[l];
        if (lay.b.size() != lay.w.cols())
            throw ModelError("mlp: dimension mismatch between weights and "
                             "biases in layer " + std::to_string(l));
        if (l > 0 && lay.w.rows() != layers_[l - 1].w.cols())
            throw ModelError("mlp: dimension mismatch between layers " +
                             std::to_string(l - 1) + " and " +
                             std::to_string(l));
        if (!lay.w.allFinite() || !lay.b.allFinite())
            throw ModelError("mlp: non-finite parameter in layer " +
                             std::to_string(l));
    }
}

MlpModel MlpModel::init(const std::vector<int>& dims, Activation activation,
                        Rng& rng) {
    if (dims.size() < 2)
        throw InputError("mlp: need at least input and output dimensions");
    std::vector<Layer> layers;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        const int r = dims[l], c = dims[l + 1];
        if (r < 1 || c < 1) throw InputError("mlp: layer dimensions must be >= 1");
        Layer lay;
        lay.w.resize(r, c);
        const double limit = std::sqrt(6.0 / (r + c));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) lay.w(i, j) = rng.uniform(-limit, limit);
        lay.b = Eigen::VectorXd::Zero(c);
        layers.push_back(std::move(lay));
    }
    return MlpModel(std::move(layers), activation);
}

int MlpModel::input_dim() const {
    return layers_.empty() ? 0 : static_cast<int>(layers_.front().w.rows());
}

int MlpModel::output_dim() const {
    return layers_.empty() ? 0 : static_cast<int>(layers_.back().w.cols());
}

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
    if (a == Activation::kRelu) return z.cwiseMax(0.0);
    return z.array().tanh().matrix();
}

} // namespace

Eigen::VectorXd MlpModel::raw_batch(const Eigen::MatrixXd& X) const {
    if (X.cols() != input_dim())
        throw ModelError("mlp: dimension mismatch: input has " +
                         std::to_string(X.cols()) + " features, network expects " +
                         std::to_string(input_dim()));
    Eigen::MatrixXd a = X;
    for (size_t l = 0; l < layers_.size(); ++l) {
        Eigen::MatrixXd z =
            (a * layers_[l].w).rowwise() + layers_[l].b.transpose();
        a = (l + 1 < layers_.size()) ? activate(z, activation_) : std::move(z);
    }
    return a.col(0);
}

double MlpModel::raw(const Eigen::VectorXd& x) const {
    if (output_dim() != 1)
        throw ModelError("mlp: dimension mismatch: scalar output expected, "
                         "network has " + std::to_string(output_dim()));
    const Eigen::MatrixXd X = x.transpose();
    return raw_batch(X)(0);
}

double forward(const MlpModel& model, const Standardizer& std,
               const LocalState& state) {
    if (model.input_dim() != 4 || model.output_dim() != 1)
        throw ModelError("mlp: dimension mismatch: state inference needs a "
                         "4-input, 1-output network");
    return std.inverse_target(model.raw(std.transform(state)));
}

// ---------------------------------------------------------------------------
// Loss and gradient

double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, double l2_strength,
                         std::vector<Layer>* gradients) {
    if (X.rows() == 0) throw InputError("mlp: empty batch");
    if (y.size() != X.rows())
        throw InputError("mlp: feature/target batch size mismatch");
    if (model.output_dim() != 1)
        throw ModelError("mlp: dimension mismatch: training needs a scalar "
                         "output");

    const auto& layers = model.layers();
    const size_t n_layers = layers.size();

    // acts[l] is the input to layer l; acts[n_layers] the network output.
    std::vector<Eigen::MatrixXd> acts(n_layers + 1);
    acts[0] = X;
    for (size_t l = 0; l < n_layers; ++l) {
        Eigen::MatrixXd z =
            (acts[l] * layers[l].w).rowwise() + layers[l].b.transpose();
        acts[l + 1] = (l + 1 < n_layers) ? activate(z, model.activation())
                                         : std::move(z);
    }

    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd diff = acts[n_layers].col(0) - y;
    double loss = diff.squaredNorm() / n;
    for (const auto& lay : layers) loss += l2_strength * lay.w.squaredNorm();

    if (gradients) {
        gradients->resize(n_layers);
        // delta = dLoss/dZ_l, starting at the identity output layer.
        Eigen::MatrixXd delta = (2.0 / n) * diff;
        for (size_t l = n_layers; l-- > 0;) {
            (*gradients)[l].w =
                acts[l].transpose() * delta + 2.0 * l2_strength * layers[l].w;
            (*gradients)[l].b = delta.colwise().sum().transpose();
            if (l > 0) {
                Eigen::MatrixXd d_prev = delta * layers[l].w.transpose();
                if (model.activation() == Activation::kRelu) {
                    // relu'(z) from the activation itself: 1 where a > 0.
                    d_prev.array() *= (acts[l].array() > 0.0).cast<double>();
                } else {
                    d_prev.array() *= 1.0 - acts[l].array().square();
                }
                delta = std::move(d_prev);
            }
        }
    }
    return loss;
}

double loss_and_gradient(const MlpModel& model, const Standardizer& std,
                         const std::vector<TrainSample>& batch,
                         double l2_strength, std::vector<Layer>* gradients) {
    if (batch.empty()) throw InputError("mlp: empty batch");
    Eigen::MatrixXd X(batch.size(), 4);
    Eigen::VectorXd y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        X.row(i) = std.transform(batch[i].state).transpose();
        y(i) = std.transform_target(batch[i].y);
    }
    return loss_and_gradient(model, X, y, l2_strength, gradients);
}

// ---------------------------------------------------------------------------
// Training

TrainResult train(const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainConfig& cfg) {
    if (cfg.max_epochs < 1) throw InputError("mlp: max_epochs must be >= 1");
    if (cfg.batch_size < 1) throw InputError("mlp: batch_size must be >= 1");
    if (cfg.patience < 1) throw InputError("mlp: patience must be >= 1");
    if (!(cfg.decay > 0.0 && cfg.decay <= 1.0))
        throw InputError("mlp: decay must be in (0, 1]");
    if (train_set.size() < static_cast<size_t>(cfg.batch_size))
        throw InputError("mlp: training set smaller than one batch");
    if (val_set.empty()) throw InputError("mlp: validation set is empty");

    const Standardizer std_ = fit_standardizer(train_set);
    auto to_matrix = [&std_](const std::vector<TrainSample>& s,
                             Eigen::MatrixXd& X, Eigen::VectorXd& y) {
        X.resize(s.size(), 4);
        y.resize(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            X.row(i) = std_.transform(s[i].state).transpose();
            y(i) = std_.transform_target(s[i].y);
        }
    };
    Eigen::MatrixXd x_train, x_val;
    Eigen::VectorXd y_train, y_val;
    to_matrix(train_set, x_train, y_train);
    to_matrix(val_set, x_val, y_val);

    Rng rng(cfg.seed);
    std::vector<int> dims;
    dims.push_back(4);
    for (int h : cfg.hidden) dims.push_back(h);
    dims.push_back(1);
    MlpModel model = MlpModel::init(dims, cfg.activation, rng);

    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), size_t{0});

    TrainReport report;
    std::vector<Layer> best_layers = model.layers();
    double best_loss = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    double improvement_ref = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;
    std::vector<Layer> grads;

    const size_t n = train_set.size();
    const size_t batch = static_cast<size_t>(cfg.batch_size);
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const double lr = cfg.learning_rate * std::pow(cfg.decay, epoch);
        rng.shuffle(order);

        for (size_t start = 0; start < n; start += batch) {
            const size_t count = std::min(batch, n - start);
            Eigen::MatrixXd xb(count, 4);
            Eigen::VectorXd yb(count);
            for (size_t i = 0; i < count; ++i) {
                xb.row(i) = x_train.row(order[start + i]);
                yb(i) = y_train(order[start + i]);
            }
            const double loss =
                loss_and_gradient(model, xb, yb, cfg.l2_strength, &grads);
            if (!std::isfinite(loss))
                throw ModelError("mlp: training diverged (non-finite loss) at "
                                 "epoch " + std::to_string(epoch));
            auto& layers = model.mutable_layers();
            for (size_t l = 0; l < layers.size(); ++l) {
                layers[l].w -= lr * grads[l].w;
                layers[l].b -= lr * grads[l].b;
            }
        }

        // Validation loss is the pure MSE, no penalty term.
        const Eigen::VectorXd pred = model.raw_batch(x_val);
        const double val = (pred - y_val).squaredNorm() /
                           static_cast<double>(y_val.size());
        if (!std::isfinite(val))
            throw ModelError("mlp: training diverged (non-finite validation "
                             "loss) at epoch " + std::to_string(epoch));
        report.loss_history.push_back(val);
        report.epochs_run = epoch + 1;
        report.final_lr = lr;

        if (val < best_loss) {
            best_loss = val;
            best_epoch = epoch;
            best_layers = model.layers();
        }
        // The patience counter uses the min-delta threshold; the best-weight
        // snapshot above uses a strict comparison so the reported best epoch
        // is the true argmin of the history.
        if (val < improvement_ref - cfg.min_delta) {
            improvement_ref = val;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.patience) {
            break;
        }
    }

    report.best_val_loss = best_loss;
    report.best_epoch = best_epoch;
    return {MlpModel(std::move(best_layers), cfg.activation), std_, report};
}

// ---------------------------------------------------------------------------
// Weight file

namespace {

void write_value(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);   // 17 significant digits
    out << buf;
}

[[noreturn]] void corrupt(const std::string& path, const std::string& what) {
    throw ModelError(path + ": dimension mismatch (" + what + ")");
}

double read_value(std::istream& in, const std::string& path,
                  const std::string& what) {
    double v;
    if (!(in >> v)) corrupt(path, what);
    return v;
}

} // namespace

void save_weights(const MlpModel& model, const Standardizer& std,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open weight file for writing: " + path);

    out << "mlpv1 " << to_string(model.activation()) << " "
        << model.layers().size() << "\n";
    for (const Layer& lay : model.layers()) {
        out << "dims " << lay.w.rows() << " " << lay.w.cols() << "\n";
        for (Eigen::Index i = 0; i < lay.w.rows(); ++i) {
            for (Eigen::Index j = 0; j < lay.w.cols(); ++j) {
                if (j) out << " ";
                write_value(out, lay.w(i, j));
            }
            out << "\n";
        }
        for (Eigen::Index j = 0; j < lay.b.size(); ++j) {
            if (j) out << " ";
            write_value(out, lay.b(j));
        }
        out << "\n";
    }
    out << "standardizer\n";
    out << "x_mean";
    for (int i = 0; i < 4; ++i) { out << " "; write_value(out, std.x_mean(i)); }
    out << "\nx_std";
    for (int i = 0; i < 4; ++i) { out << " "; write_value(out, std.x_std(i)); }
    out << "\ny_mean ";
    write_value(out, std.y_mean);
    out << "\ny_std ";
    write_value(out, std.y_std);
    out << "\n";
    if (!out) throw InputError("failed writing weight file: " + path);
}

LoadedMlp load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open weight file: " + path);

    std::string magic, act_tag;
    size_t n_layers = 0;
    if (!(in >> magic)) corrupt(path, "empty file");
    if (magic != "mlpv1")
        throw ModelError(path + ": unsupported weight file version '" + magic +
                         "'");
    if (!(in >> act_tag >> n_layers)) corrupt(path, "truncated header");
    const Activation act = activation_from_string(act_tag);
    if (n_layers < 1 || n_layers > 64)
        throw ModelError(path + ": implausible layer count " +
                         std::to_string(n_layers));

    std::vector<Layer> layers;
    for (size_t l = 0; l < n_layers; ++l) {
        std::string kw;
        Eigen::Index r = 0, c = 0;
        if (!(in >> kw) || kw != "dims" || !(in >> r >> c) || r < 1 || c < 1)
            corrupt(path, "bad layer header in layer " + std::to_string(l));
        Layer lay;
        lay.w.resize(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                lay.w(i, j) = read_value(
                    in, path, "truncated weight data in layer " +
                              std::to_string(l));
        lay.b.resize(c);
        for (Eigen::Index j = 0; j < c; ++j)
            lay.b(j) = read_value(
                in, path, "truncated bias data in layer " + std::to_string(l));
        layers.push_back(std::move(lay));
    }

    std::string kw;
    if (!(in >> kw) || kw != "standardizer")
        corrupt(path, "missing standardizer block");
    Standardizer st;
    if (!(in >> kw) || kw != "x_mean") corrupt(path, "missing x_mean");
    for (int i = 0; i < 4; ++i)
        st.x_mean(i) = read_value(in, path, "truncated x_mean");
    if (!(in >> kw) || kw != "x_std") corrupt(path, "missing x_std");
    for (int i = 0; i < 4; ++i)
        st.x_std(i) = read_value(in, path, "truncated x_std");
    if (!(in >> kw) || kw != "y_mean") corrupt(path, "missing y_mean");
    st.y_mean = read_value(in, path, "truncated y_mean");
    if (!(in >> kw) || kw != "y_std") corrupt(path, "missing y_std");
    st.y_std = read_value(in, path, "truncated y_std");
    for (int i = 0; i < 4; ++i)
        if (!(st.x_std(i) > 0.0))
            throw ModelError(path + ": non-positive feature std");
    if (!(st.y_std > 0.0)) throw ModelError(path + ": non-positive target std");

    return {MlpModel(std::move(layers), act), st};
}

} // namespace chf
