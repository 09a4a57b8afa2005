#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chf/random.hpp"
#include "chf/state.hpp"

namespace chf {

enum class Activation { kRelu, kTanh };

std::string to_string(Activation a);
/// Unknown tag -> ModelError naming the tag.
Activation activation_from_string(const std::string& tag);

/// One dense layer. The weight matrix is (fan_in x fan_out), matching the
/// row-vector convention of the weight file; bias has fan_out entries.
struct Layer {
    Eigen::MatrixXd w;
    Eigen::VectorXd b;
};

/// Feature/target standardization fitted on the training split only.
/// Feature order is [D_he, P, G, x_e].
struct Standardizer {
    Eigen::Vector4d x_mean = Eigen::Vector4d::Zero();
    Eigen::Vector4d x_std = Eigen::Vector4d::Ones();
    double y_mean = 0.0;
    double y_std = 1.0;

    Eigen::Vector4d transform(const LocalState& s) const;
    double transform_target(double y) const { return (y - y_mean) / y_std; }
    double inverse_target(double y_std_units) const {
        return y_mean + y_std * y_std_units;
    }
};

/// One training record: a local state plus a target in natural units
/// (absolute CHF for the pure model, a residual for hybrids).
struct TrainSample {
    LocalState state;
    double y;
};

/// Fits means and population stds on the given samples; a zero std
/// (constant column) is replaced by 1 so transform stays total.
Standardizer fit_standardizer(const std::vector<TrainSample>& samples);

/// Plain feed-forward network: hidden layers share one activation,
/// the output layer is identity. Operates on standardized features.
class MlpModel {
public:
    MlpModel() = default;
    /// Validates that consecutive layer dimensions chain and that all
    /// parameters are finite.
    MlpModel(std::vector<Layer> layers, Activation activation);

    /// Glorot-uniform initialization: weights in +-sqrt(6/(fan_in+fan_out))
    /// drawn row-major from `rng`, biases zero. dims = {in, hidden..., out}.
    static MlpModel init(const std::vector<int>& dims, Activation activation,
                         Rng& rng);

    int input_dim() const;
    int output_dim() const;
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& mutable_layers() { return layers_; }
    Activation activation() const { return activation_; }

    /// Network output for one standardized feature vector.
    double raw(const Eigen::VectorXd& x) const;
    /// Batched version; X rows are samples. Returns one output per row.
    Eigen::VectorXd raw_batch(const Eigen::MatrixXd& X) const;

private:
    std::vector<Layer> layers_;
    Activation activation_ = Activation::kRelu;
};

/// Standardizes the state, runs the network, de-standardizes the scalar
/// output. Requires a 4-input / 1-output network.
double forward(const MlpModel& model, const Standardizer& std,
               const LocalState& state);

/// Loss = mean((pred - y)^2) + l2 * sum(w^2) on standardized features X
/// (rows = samples) and standardized targets y; gradients by
/// backpropagation, shaped like the layers. The L2 penalty covers weights
/// only, never biases.
double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, double l2_strength,
                         std::vector<Layer>* gradients);

/// Convenience overload on raw samples; standardizes with `std` first.
/// Empty batch -> InputError.
double loss_and_gradient(const MlpModel& model, const Standardizer& std,
                         const std::vector<TrainSample>& batch,
                         double l2_strength, std::vector<Layer>* gradients);

struct TrainConfig {
    int max_epochs = 500;
    int batch_size = 64;
    double learning_rate = 1e-2;   // lr at epoch k is learning_rate*decay^k
    double decay = 0.99;
    int patience = 20;             // early-stopping window [epochs]
    double min_delta = 1e-5;       // improvement threshold on val loss
    double l2_strength = 1e-4;
    uint64_t seed = 0;
    std::vector<int> hidden = {16, 16};
    Activation activation = Activation::kRelu;
};

struct TrainReport {
    int epochs_run = 0;
    double best_val_loss = 0.0;
    int best_epoch = 0;            // 0-based index into loss_history
    double final_lr = 0.0;
    std::vector<double> loss_history;   // validation MSE per epoch, no penalty
};

struct TrainResult {
    MlpModel model;
    Standardizer standardizer;
    TrainReport report;
};

/// Mini-batch gradient descent with exponential learning-rate decay and
/// early stopping; returns the weights of the best validation epoch.
/// Deterministic given cfg.seed. Divergence (NaN loss) -> ModelError
/// carrying the epoch.
TrainResult train(const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainConfig& cfg);

/// Versioned plain-text weight file; 17-significant-digit round trip.
void save_weights(const MlpModel& model, const Standardizer& std,
                  const std::string& path);

struct LoadedMlp {
    MlpModel model;
    Standardizer standardizer;
};

LoadedMlp load_weights(const std::string& path);

} // namespace chf
