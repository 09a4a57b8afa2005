#include "chf/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chf/errors.hpp"
#include "chf/random.hpp"

namespace chf {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

} // namespace

IngestReport ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open dataset: " + path);

    IngestReport report;
    std::string line;
    size_t lineno = 0;

    // Column indices; -1 = absent.
    int col_d = -1, col_p = -1, col_g = -1, col_x = -1, col_chf = -1;
    int col_dhsub = -1, col_lh = -1;
    size_t n_cols = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;

        if (!header_seen) {
            const auto names = split_csv(line);
            for (size_t i = 0; i < names.size(); ++i) {
                const std::string& n = names[i];
                if (n == "Dhe_m") col_d = static_cast<int>(i);
                else if (n == "P_kPa") col_p = static_cast<int>(i);
                else if (n == "G_kgm2s") col_g = static_cast<int>(i);
                else if (n == "x") col_x = static_cast<int>(i);
                else if (n == "chf_kWm2") col_chf = static_cast<int>(i);
                else if (n == "dhsub_kJkg") col_dhsub = static_cast<int>(i);
                else if (n == "Lh_m") col_lh = static_cast<int>(i);
                else
                    report.warnings.push_back("unknown column '" + n +
                                              "' ignored");
            }
            if (col_d < 0 || col_p < 0 || col_g < 0 || col_x < 0 || col_chf < 0)
                throw InputError(
                    path + ": header must contain "
                    "Dhe_m,P_kPa,G_kgm2s,x,chf_kWm2");
            if (col_dhsub < 0)
                report.warnings.push_back(
                    "no dhsub_kJkg column; negative-subcooling filter not "
                    "applied");
            n_cols = names.size();
            header_seen = true;
            continue;
        }

        const auto fields = split_csv(line);
        if (fields.size() != n_cols)
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(n_cols) +
                             " fields, got " + std::to_string(fields.size()));
        auto value = [&](int col) {
            try {
                return std::stod(fields[static_cast<size_t>(col)]);
            } catch (const std::exception&) {
                throw InputError(path + ":" + std::to_string(lineno) +
                                 ": bad value '" +
                                 fields[static_cast<size_t>(col)] + "'");
            }
        };

        ChfPoint pt;
        pt.state.d_he_m = value(col_d);
        pt.state.p_kpa = value(col_p);
        pt.state.g_kgm2s = value(col_g);
        pt.state.x_e = value(col_x);
        pt.exp_chf_kwm2 = value(col_chf);
        if (!(pt.exp_chf_kwm2 > 0.0))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": non-positive measured CHF");
        if (col_dhsub >= 0) {
            pt.has_dhsub = true;
            pt.dhsub_kjkg = value(col_dhsub);
        }
        if (col_lh >= 0) {
            pt.has_lh = true;
            pt.lh_m = value(col_lh);
        }

        if (pt.has_dhsub && pt.dhsub_kjkg < 0.0) {
            ++report.dropped;
            continue;
        }
        report.points.push_back(pt);
    }
    if (!header_seen) throw InputError(path + ": empty dataset");
    return report;
}

std::vector<TrainSample> to_train_samples(
    const std::vector<ChfPoint>& points) {
    std::vector<TrainSample> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.state, p.exp_chf_kwm2});
    return out;
}

SplitSizes split_sizes(size_t n, const SplitSpec& spec) {
    if (spec.f_train < 0.0 || spec.f_val < 0.0 || spec.f_test < 0.0)
        throw InputError("split: fractions must be >= 0");
    if (std::abs(spec.f_train + spec.f_val + spec.f_test - 1.0) > 1e-12)
        throw InputError("split: fractions must sum to 1");
    SplitSizes s;
    s.val = static_cast<size_t>(static_cast<double>(n) * spec.f_val);
    s.test = static_cast<size_t>(static_cast<double>(n) * spec.f_test);
    s.train = n - s.val - s.test;
    return s;
}

SplitResult split(std::vector<ChfPoint> points, const SplitSpec& spec) {
    const SplitSizes sizes = split_sizes(points.size(), spec);
    Rng rng(spec.seed);
    rng.shuffle(points);

    SplitResult out;
    out.train.assign(points.begin(), points.begin() + sizes.train);
    out.val.assign(points.begin() + sizes.train,
                   points.begin() + sizes.train + sizes.val);
    out.test.assign(points.begin() + sizes.train + sizes.val, points.end());
    return out;
}

} // namespace chf
