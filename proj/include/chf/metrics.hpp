#pragma once

#include <string>
#include <vector>

namespace chf {

/// Absolute-percentage-error statistics over a prediction set.
struct MetricsReport {
    double mu_pct = 0.0;     // mean
    double med_pct = 0.0;    // median (mean of middle two for even n)
    double max_pct = 0.0;
    double std_pct = 0.0;    // population standard deviation
    double f10_pct = 0.0;    // share of points with error strictly > 10%
    double f25_pct = 0.0;    // share strictly > 25%
    size_t n = 0;
};

/// errors_i = 100*|pred_i - exp_i|/exp_i. Requires equal non-zero lengths
/// and strictly positive measured values.
MetricsReport compute_metrics(const std::vector<double>& pred,
                              const std::vector<double>& exp_values);

/// One model's outcome on one bundle case.
struct CasePrediction {
    double chf_at_obs_kwm2;   // predicted magnitude at the observed location
    bool critical_found;
    double l_cr_m;            // predicted critical elevation, if found
};

/// One case's truth plus every model's prediction (same model order
/// across cases).
struct CaseTruth {
    std::string case_id;
    double exp_chf_kwm2;   // measured CHF at l_obs, > 0
    double l_obs_m;        // observed critical elevation, > 0
    std::vector<CasePrediction> per_model;
};

/// Signed relative errors per case and model:
/// magnitude 100*(pred - exp)/exp, location 100*(l_cr - l_obs)/l_obs.
struct BundleErrorRow {
    std::string case_id;
    std::vector<double> mag_err_pct;
    std::vector<double> loc_err_pct;   // NaN when no crossing was predicted
    std::vector<bool> has_loc;
};

struct BundleErrorTable {
    std::vector<std::string> model_names;
    std::vector<BundleErrorRow> rows;        // sorted by case id
    // Headline summary: means of |error| per model. Location means skip
    // cases with no predicted crossing (NaN if none at all).
    std::vector<double> mean_abs_mag_pct;
    std::vector<double> mean_abs_loc_pct;
    // Signed means, emitted for transparency.
    std::vector<double> mean_signed_mag_pct;
    std::vector<double> mean_signed_loc_pct;
};

/// Builds the per-case error table plus summary rows. Missing truth
/// (exp_chf or l_obs not > 0) is an error naming the case.
BundleErrorTable bundle_error_table(const std::vector<std::string>& model_names,
                                    const std::vector<CaseTruth>& cases);

} // namespace chf
