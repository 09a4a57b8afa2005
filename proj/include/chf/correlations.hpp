#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chf/model.hpp"
#include "chf/props.hpp"

namespace chf {

// Coefficient sets are transcribed from the primary sources:
//   Bowring: AEEW-R 789 (1972), round-tube uniform-flux dryout correlation,
//            valid roughly 0.2-19 MPa.
//   W-3:     Tong (1967), local-conditions form, British engineering units
//            internally (psia, lb/hr-ft2, inches, MBtu/hr-ft2).
// Every constant is a named struct field so single coefficients can be
// overridden from a CSV file for sensitivity studies.

/// Bowring correlation constants. The low-pressure branch fits F1, the
/// ratio F1/F2, and F3 as (pr^a * exp(b*(1-pr)) + c)/d in the reduced
/// pressure pr = 0.145 * P[MPa]; the high branch (pr >= 1) uses plain
/// power-law * exponential forms. F4 = F3 * pr^f4_pow in both branches.
struct BowringCoefficients {
    double pr_per_mpa = 0.145;

    // pr < 1 branch
    double f1_pow = 18.942, f1_rate = 20.89, f1_add = 0.917, f1_div = 1.917;
    double f12_pow = 1.316, f12_rate = 2.444, f12_add = 0.309, f12_div = 1.309;
    double f3_pow = 17.023, f3_rate = 16.658, f3_add = 0.667, f3_div = 1.667;

    // pr >= 1 branch
    double f1_hi_pow = -0.368, f1_hi_rate = 0.648;
    double f12_hi_pow = -0.448, f12_hi_rate = 0.245;
    double f3_hi_pow = 0.219;

    double f4_pow = 1.649;

    // A = a_lead * (hfg*D*G/4) * F1 / (1 + a_denom * F2 * sqrt(D*G))
    // C = c_lead * F3 * D * G / (1 + c_denom * F4 * (G/g_ref)^n),
    //   n = n_base - n_slope * pr
    double a_lead = 2.317, a_denom = 0.0143;
    double c_lead = 0.077, c_denom = 0.347;
    double g_ref = 1356.0;
    double n_base = 2.0, n_slope = 0.5;

    /// Assign a coefficient by its field name; unknown name -> InputError.
    void set(const std::string& coefficient, double value);
};

/// W-3 correlation constants: q[MBtu/hr-ft2] = t1*t2*t3*t4*t5 with
///   t1 = (p_a - p_b*p) + (px_a - px_b*p) * exp((e_a - e_b*p) * x)
///   t2 = (g_a - g_b*x + g_c*x*|x|) * G/1e6 + g_d
///   t3 = x_a - x_b*x
///   t4 = d_a + d_b * exp(-d_c * De)
///   t5 = h_a + h_b * dh_sub   (dh_sub pinned to 0 in local form)
struct W3Coefficients {
    double p_a = 2.022, p_b = 0.0004302;
    double px_a = 0.1722, px_b = 0.0000984;
    double e_a = 18.177, e_b = 0.004129;
    double g_a = 0.1484, g_b = 1.596, g_c = 0.1729, g_d = 1.037;
    double x_a = 1.157, x_b = 0.869;
    double d_a = 0.2664, d_b = 0.8357, d_c = 3.151;
    double h_a = 0.8258, h_b = 0.000794;

    /// Assign a coefficient by its field name; unknown name -> InputError.
    void set(const std::string& coefficient, double value);
};

/// One row of a coefficient-override CSV (`name,coefficient,value`):
/// model is "bowring" or "w3".
struct CoefficientOverride {
    std::string model;
    std::string coefficient;
    double value;
};

/// Parses an override CSV with header `name,coefficient,value`.
/// `#` comment lines allowed. Malformed row -> InputError.
std::vector<CoefficientOverride> load_coefficient_overrides(
    const std::string& path);

/// Applies the overrides addressed to `model_name`, ignoring the rest.
template <class Coefficients>
void apply_overrides(Coefficients& coeffs,
                     const std::vector<CoefficientOverride>& overrides,
                     const std::string& model_name) {
    for (const auto& o : overrides)
        if (o.model == model_name) coeffs.set(o.coefficient, o.value);
}

/// Bowring (1972) round-tube CHF correlation in local-conditions form.
/// Needs saturation properties for the local latent heat.
class BowringModel final : public ChfModel {
public:
    explicit BowringModel(std::shared_ptr<const PropertyTable> props,
                          BowringCoefficients coeffs = {});

    std::string name() const override { return "bowring"; }
    ChfEstimate predict(const LocalState& state) const override;
    ValidityEnvelope envelope() const override;

    const BowringCoefficients& coefficients() const { return coeffs_; }

private:
    std::shared_ptr<const PropertyTable> props_;
    BowringCoefficients coeffs_;
};

/// W-3 (Tong 1967) CHF correlation in local-conditions form with the
/// inlet-subcooling factor pinned at saturated inlet.
class W3Model final : public ChfModel {
public:
    explicit W3Model(W3Coefficients coeffs = {});

    std::string name() const override { return "w3"; }
    ChfEstimate predict(const LocalState& state) const override;
    ValidityEnvelope envelope() const override;

    const W3Coefficients& coefficients() const { return coeffs_; }

private:
    W3Coefficients coeffs_;
};

} // namespace chf
