#include "chf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chf/errors.hpp"

namespace chf {

MetricsReport compute_metrics(const std::vector<double>& pred,
                              const std::vector<double>& exp_values) {
    if (pred.size() != exp_values.size())
        throw InputError("metrics: prediction/measurement length mismatch");
    if (pred.empty()) throw InputError("metrics: empty input");

    std::vector<double> eps;
    eps.reserve(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) {
        if (!(exp_values[i] > 0.0))
            throw InputError("metrics: non-positive measured value at index " +
                             std::to_string(i));
        eps.push_back(100.0 * std::abs(pred[i] - exp_values[i]) /
                      exp_values[i]);
    }

    MetricsReport r;
    r.n = eps.size();
    const double n = static_cast<double>(eps.size());

    double sum = 0.0;
    size_t over10 = 0, over25 = 0;
    for (double e : eps) {
        sum += e;
        if (e > 10.0) ++over10;
        if (e > 25.0) ++over25;
    }
    r.mu_pct = sum / n;

    double var = 0.0;
    for (double e : eps) var += (e - r.mu_pct) * (e - r.mu_pct);
    r.std_pct = std::sqrt(var / n);

    std::vector<double> sorted = eps;
    std::sort(sorted.begin(), sorted.end());
    const size_t mid = sorted.size() / 2;
    r.med_pct = sorted.size() % 2 == 1
                    ? sorted[mid]
                    : 0.5 * (sorted[mid - 1] + sorted[mid]);
    r.max_pct = sorted.back();
    r.f10_pct = 100.0 * static_cast<double>(over10) / n;
    r.f25_pct = 100.0 * static_cast<double>(over25) / n;
    return r;
}

BundleErrorTable bundle_error_table(const std::vector<std::string>& model_names,
                                    const std::vector<CaseTruth>& cases) {
    if (model_names.empty())
        throw InputError("bundle errors: no models");
    if (cases.empty()) throw InputError("bundle errors: no cases");

    const size_t nm = model_names.size();
    BundleErrorTable table;
    table.model_names = model_names;

    for (const CaseTruth& c : cases) {
        if (!(c.exp_chf_kwm2 > 0.0))
            throw InputError("bundle errors: case '" + c.case_id +
                             "' is missing its measured CHF");
        if (!(c.l_obs_m > 0.0))
            throw InputError("bundle errors: case '" + c.case_id +
                             "' is missing its observed location");
        if (c.per_model.size() != nm)
            throw InputError("bundle errors: case '" + c.case_id + "' has " +
                             std::to_string(c.per_model.size()) +
                             " predictions for " + std::to_string(nm) +
                             " models");
        BundleErrorRow row;
        row.case_id = c.case_id;
        for (const CasePrediction& p : c.per_model) {
            row.mag_err_pct.push_back(
                100.0 * (p.chf_at_obs_kwm2 - c.exp_chf_kwm2) / c.exp_chf_kwm2);
            if (p.critical_found) {
                row.loc_err_pct.push_back(100.0 * (p.l_cr_m - c.l_obs_m) /
                                          c.l_obs_m);
                row.has_loc.push_back(true);
            } else {
                row.loc_err_pct.push_back(
                    std::numeric_limits<double>::quiet_NaN());
                row.has_loc.push_back(false);
            }
        }
        table.rows.push_back(std::move(row));
    }

    std::sort(table.rows.begin(), table.rows.end(),
              [](const BundleErrorRow& a, const BundleErrorRow& b) {
                  return a.case_id < b.case_id;
              });

    table.mean_abs_mag_pct.assign(nm, 0.0);
    table.mean_signed_mag_pct.assign(nm, 0.0);
    table.mean_abs_loc_pct.assign(nm, 0.0);
    table.mean_signed_loc_pct.assign(nm, 0.0);
    for (size_t m = 0; m < nm; ++m) {
        double abs_sum = 0.0, signed_sum = 0.0;
        double abs_loc = 0.0, signed_loc = 0.0;
        size_t n_loc = 0;
        for (const BundleErrorRow& row : table.rows) {
            abs_sum += std::abs(row.mag_err_pct[m]);
            signed_sum += row.mag_err_pct[m];
            if (row.has_loc[m]) {
                abs_loc += std::abs(row.loc_err_pct[m]);
                signed_loc += row.loc_err_pct[m];
                ++n_loc;
            }
        }
        const double nr = static_cast<double>(table.rows.size());
        table.mean_abs_mag_pct[m] = abs_sum / nr;
        table.mean_signed_mag_pct[m] = signed_sum / nr;
        if (n_loc > 0) {
            table.mean_abs_loc_pct[m] = abs_loc / static_cast<double>(n_loc);
            table.mean_signed_loc_pct[m] =
                signed_loc / static_cast<double>(n_loc);
        } else {
            table.mean_abs_loc_pct[m] =
                std::numeric_limits<double>::quiet_NaN();
            table.mean_signed_loc_pct[m] =
                std::numeric_limits<double>::quiet_NaN();
        }
    }
    return table;
}

} // namespace chf
