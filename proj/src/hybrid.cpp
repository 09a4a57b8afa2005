#include "chf/hybrid.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "chf/errors.hpp"

namespace chf {

std::vector<ResidualRecord> build_residual_dataset(
    const ChfModel& base, const std::vector<TrainSample>& data) {
    if (data.empty())
        throw InputError("hybrid: no records to build residuals from");
    std::vector<ResidualRecord> out;
    out.reserve(data.size());
    for (size_t i = 0; i < data.size(); ++i) {
        ChfEstimate est;
        try {
            est = base.predict(data[i].state);
        } catch (const Error& e) {
            throw ModelError("hybrid: base model '" + base.name() +
                             "' failed on record " + std::to_string(i) + ": " +
                             e.what());
        }
        ResidualRecord r;
        r.state = data[i].state;
        r.base_chf = est.chf_kwm2;
        r.exp_chf = data[i].y;
        r.residual = r.exp_chf - r.base_chf;
        r.extrapolated = est.extrapolated;
        out.push_back(r);
    }
    return out;
}

std::vector<TrainSample> residual_training_set(
    const std::vector<ResidualRecord>& records) {
    std::vector<TrainSample> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.state, r.residual});
    return out;
}

HybridModel::HybridModel(std::shared_ptr<const ChfModel> base,
                         MlpModel residual, Standardizer residual_std,
                         std::string name)
    : base_(std::move(base)),
      residual_(std::move(residual)),
      residual_std_(residual_std),
      name_(std::move(name)) {
    if (!base_) throw InputError("hybrid: base model is null");
    if (residual_.input_dim() != 4 || residual_.output_dim() != 1)
        throw ModelError("hybrid: residual network must map 4 features to 1 "
                         "output");
}

ChfEstimate HybridModel::predict(const LocalState& state) const {
    const ChfEstimate base_est = base_->predict(state);
    const double correction = forward(residual_, residual_std_, state);
    ChfEstimate est;
    est.chf_kwm2 = base_est.chf_kwm2 + correction;
    est.extrapolated = base_est.extrapolated;
    est.non_positive = est.chf_kwm2 <= 0.0;
    return est;
}

HybridManifest load_hybrid_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open hybrid manifest: " + path);

    HybridManifest m;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key, value;
        if (!(ss >> key >> value))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected 'key value'");
        if (key == "name") m.name = value;
        else if (key == "base") m.base = value;
        else if (key == "props") m.props_path = value;
        else if (key == "lut") m.lut_path = value;
        else if (key == "weights") m.weights_path = value;
        else
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": unknown manifest key '" + key + "'");
    }
    if (m.name.empty() || m.base.empty() || m.weights_path.empty())
        throw InputError(path +
                         ": manifest needs 'name', 'base' and 'weights'");
    return m;
}

void save_hybrid_manifest(const HybridManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open manifest for writing: " + path);
    out << "name " << m.name << "\n";
    out << "base " << m.base << "\n";
    if (!m.props_path.empty()) out << "props " << m.props_path << "\n";
    if (!m.lut_path.empty()) out << "lut " << m.lut_path << "\n";
    out << "weights " << m.weights_path << "\n";
    if (!out) throw InputError("failed writing manifest: " + path);
}

} // namespace chf
