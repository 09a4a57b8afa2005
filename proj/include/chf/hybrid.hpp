#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chf/mlp.hpp"
#include "chf/model.hpp"

namespace chf {

/// One training row for a residual model: the base prediction and the
/// measurement it missed. residual == exp_chf - base_chf always.
struct ResidualRecord {
    LocalState state;
    double base_chf;      // [kW/m2]
    double exp_chf;       // [kW/m2]
    double residual;      // exp_chf - base_chf [kW/m2]
    bool extrapolated;    // base model's flag, preserved
};

/// Evaluates the base model on every (state, exp_chf) record. A base
/// evaluation error is rethrown as a ModelError naming the record index.
std::vector<ResidualRecord> build_residual_dataset(
    const ChfModel& base, const std::vector<TrainSample>& data);

/// Projects residual records to (state, residual) training samples.
std::vector<TrainSample> residual_training_set(
    const std::vector<ResidualRecord>& records);

/// Base model plus an additive MLP residual correction:
/// prediction = base(state) + residual(state), never clipped. A total
/// <= 0 sets the non_positive flag; the base's extrapolation flag is
/// carried through.
class HybridModel final : public ChfModel {
public:
    HybridModel(std::shared_ptr<const ChfModel> base, MlpModel residual,
                Standardizer residual_std, std::string name);

    std::string name() const override { return name_; }
    ChfEstimate predict(const LocalState& state) const override;
    ValidityEnvelope envelope() const override { return base_->envelope(); }

    const ChfModel& base() const { return *base_; }
    const MlpModel& residual() const { return residual_; }
    const Standardizer& residual_standardizer() const { return residual_std_; }

private:
    std::shared_ptr<const ChfModel> base_;
    MlpModel residual_;
    Standardizer residual_std_;
    std::string name_;
};

/// Recipe for reconstructing a hybrid from paths alone. Paths are stored
/// as written in the file; callers resolve relative ones against the
/// manifest's directory.
struct HybridManifest {
    std::string name;          // model identifier, e.g. "hybrid-lut"
    std::string base;          // base id: base-bowring | base-w3 | base-lut
    std::string props_path;    // saturation-property CSV (empty if unused)
    std::string lut_path;      // lookup-table CSV (empty if unused)
    std::string weights_path;  // residual weight file
};

/// Key-value text file, one `key value` pair per line, `#` comments.
/// Required keys: name, base, weights. Optional: props, lut.
HybridManifest load_hybrid_manifest(const std::string& path);
void save_hybrid_manifest(const HybridManifest& manifest,
                          const std::string& path);

} // namespace chf
