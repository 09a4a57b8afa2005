#pragma once

#include <memory>
#include <string>

#include "chf/lut.hpp"
#include "chf/mlp.hpp"
#include "chf/model.hpp"
#include "chf/props.hpp"

namespace chf {

/// Data-file locations consumed by builtin model ids that need them.
struct ModelPaths {
    std::string props;     // saturation-property CSV (bowring bases)
    std::string lut;       // lookup-table CSV (lut bases)
    std::string weights;   // weight file (pure-ml and builtin hybrids)
};

/// A trained network used directly as the CHF predictor. Carries no
/// physical validity box, so the envelope is a wide finite one and the
/// extrapolation flag stays clear; a non-positive output is flagged.
class MlpChfModel final : public ChfModel {
public:
    MlpChfModel(MlpModel model, Standardizer standardizer,
                std::string name = "pure-ml");

    std::string name() const override { return name_; }
    ChfEstimate predict(const LocalState& state) const override;
    ValidityEnvelope envelope() const override;

private:
    MlpModel model_;
    Standardizer std_;
    std::string name_;
};

std::shared_ptr<const PropertyTable> load_props_shared(
    const std::string& path);
std::shared_ptr<const LookupTable> load_lut_shared(const std::string& path);

/// Builds a model from a builtin id — base-bowring | base-w3 | base-lut |
/// pure-ml | hybrid-bowring | hybrid-lut — or from a hybrid manifest
/// path (anything that is not a builtin id). Manifest-relative paths are
/// resolved against the manifest's directory.
std::shared_ptr<const ChfModel> make_model(const std::string& id_or_path,
                                           const ModelPaths& paths);

} // namespace chf
