#include "chf/registry.hpp"

#include <filesystem>
#include <utility>

#include "chf/correlations.hpp"
#include "chf/errors.hpp"
#include "chf/hybrid.hpp"

namespace chf {

MlpChfModel::MlpChfModel(MlpModel model, Standardizer standardizer,
                         std::string name)
    : model_(std::move(model)), std_(standardizer), name_(std::move(name)) {
    if (model_.input_dim() != 4 || model_.output_dim() != 1)
        throw ModelError("pure-ml: network must map 4 features to 1 output");
}

ChfEstimate MlpChfModel::predict(const LocalState& state) const {
    ChfEstimate est;
    est.chf_kwm2 = forward(model_, std_, state);
    est.non_positive = est.chf_kwm2 <= 0.0;
    return est;
}

ValidityEnvelope MlpChfModel::envelope() const {
    return {{1.0, 1.0e5},      // P [kPa]
            {1.0e-6, 1.0e6},   // G [kg/m2-s]
            {-10.0, 10.0},     // x_e
            {1.0e-4, 1.0}};    // D [m]
}

std::shared_ptr<const PropertyTable> load_props_shared(
    const std::string& path) {
    if (path.empty())
        throw InputError("a saturation-property table path is required");
    return std::make_shared<const PropertyTable>(PropertyTable::load(path));
}

std::shared_ptr<const LookupTable> load_lut_shared(const std::string& path) {
    if (path.empty()) throw InputError("a lookup-table path is required");
    return std::make_shared<const LookupTable>(LookupTable::load(path));
}

namespace {

std::string resolve(const std::filesystem::path& base_dir,
                    const std::string& p) {
    if (p.empty()) return p;
    const std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (base_dir / fp).string();
}

std::shared_ptr<const ChfModel> make_builtin(const std::string& id,
                                             const ModelPaths& paths) {
    if (id == "base-bowring")
        return std::make_shared<BowringModel>(load_props_shared(paths.props));
    if (id == "base-w3") return std::make_shared<W3Model>();
    if (id == "base-lut")
        return std::make_shared<LutModel>(load_lut_shared(paths.lut));
    if (id == "pure-ml") {
        if (paths.weights.empty())
            throw InputError("model 'pure-ml' needs a weight file");
        LoadedMlp loaded = load_weights(paths.weights);
        return std::make_shared<MlpChfModel>(std::move(loaded.model),
                                             loaded.standardizer);
    }
    if (id == "hybrid-bowring" || id == "hybrid-lut") {
        if (paths.weights.empty())
            throw InputError("model '" + id + "' needs a weight file");
        const std::string base_id =
            id == "hybrid-bowring" ? "base-bowring" : "base-lut";
        LoadedMlp loaded = load_weights(paths.weights);
        return std::make_shared<HybridModel>(make_builtin(base_id, paths),
                                             std::move(loaded.model),
                                             loaded.standardizer, id);
    }
    throw InputError("unknown model id '" + id + "'");
}

bool is_builtin(const std::string& id) {
    return id == "base-bowring" || id == "base-w3" || id == "base-lut" ||
           id == "pure-ml" || id == "hybrid-bowring" || id == "hybrid-lut";
}

} // namespace

std::shared_ptr<const ChfModel> make_model(const std::string& id_or_path,
                                           const ModelPaths& paths) {
    if (is_builtin(id_or_path)) return make_builtin(id_or_path, paths);

    // Anything else is a hybrid manifest on disk.
    const HybridManifest m = load_hybrid_manifest(id_or_path);
    if (!is_builtin(m.base) || m.base.rfind("base-", 0) != 0)
        throw InputError(id_or_path + ": manifest base must be one of "
                         "base-bowring, base-w3, base-lut");
    const auto dir = std::filesystem::path(id_or_path).parent_path();
    ModelPaths resolved;
    resolved.props = m.props_path.empty() ? paths.props
                                          : resolve(dir, m.props_path);
    resolved.lut = m.lut_path.empty() ? paths.lut : resolve(dir, m.lut_path);

    LoadedMlp loaded = load_weights(resolve(dir, m.weights_path));
    return std::make_shared<HybridModel>(make_builtin(m.base, resolved),
                                         std::move(loaded.model),
                                         loaded.standardizer, m.name);
}

} // namespace chf
