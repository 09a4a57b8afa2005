#include "chf/correlations.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "chf/errors.hpp"

namespace chf {
namespace {

void require_physical(const LocalState& s, const std::string& model) {
    if (!(s.d_he_m > 0.0))
        throw InputError(model + ": D_he must be > 0, got " +
                         std::to_string(s.d_he_m));
    if (!(s.p_kpa > 0.0))
        throw InputError(model + ": P must be > 0, got " +
                         std::to_string(s.p_kpa));
    if (!(s.g_kgm2s > 0.0))
        throw InputError(model + ": G must be > 0, got " +
                         std::to_string(s.g_kgm2s));
    if (!std::isfinite(s.x_e))
        throw InputError(model + ": x_e must be finite");
}

bool outside(const ValidityEnvelope& env, const LocalState& s) {
    return !env.p_kpa.contains(s.p_kpa) || !env.g_kgm2s.contains(s.g_kgm2s) ||
           !env.x_e.contains(s.x_e) || !env.d_he_m.contains(s.d_he_m);
}

template <class Coefficients>
void set_by_table(
    Coefficients& c, const std::string& name, double value,
    const std::vector<std::pair<const char*, double Coefficients::*>>& table,
    const char* model) {
    for (const auto& [key, member] : table) {
        if (name == key) {
            c.*member = value;
            return;
        }
    }
    throw InputError(std::string("unknown coefficient '") + name +
                     "' for model '" + model + "'");
}

} // namespace

void BowringCoefficients::set(const std::string& coefficient, double value) {
    using B = BowringCoefficients;
    static const std::vector<std::pair<const char*, double B::*>> table = {
        {"pr_per_mpa", &B::pr_per_mpa},
        {"f1_pow", &B::f1_pow},       {"f1_rate", &B::f1_rate},
        {"f1_add", &B::f1_add},       {"f1_div", &B::f1_div},
        {"f12_pow", &B::f12_pow},     {"f12_rate", &B::f12_rate},
        {"f12_add", &B::f12_add},     {"f12_div", &B::f12_div},
        {"f3_pow", &B::f3_pow},       {"f3_rate", &B::f3_rate},
        {"f3_add", &B::f3_add},       {"f3_div", &B::f3_div},
        {"f1_hi_pow", &B::f1_hi_pow}, {"f1_hi_rate", &B::f1_hi_rate},
        {"f12_hi_pow", &B::f12_hi_pow}, {"f12_hi_rate", &B::f12_hi_rate},
        {"f3_hi_pow", &B::f3_hi_pow}, {"f4_pow", &B::f4_pow},
        {"a_lead", &B::a_lead},       {"a_denom", &B::a_denom},
        {"c_lead", &B::c_lead},       {"c_denom", &B::c_denom},
        {"g_ref", &B::g_ref},         {"n_base", &B::n_base},
        {"n_slope", &B::n_slope},
    };
    set_by_table(*this, coefficient, value, table, "bowring");
}

void W3Coefficients::set(const std::string& coefficient, double value) {
    using W = W3Coefficients;
    static const std::vector<std::pair<const char*, double W::*>> table = {
        {"p_a", &W::p_a},   {"p_b", &W::p_b},   {"px_a", &W::px_a},
        {"px_b", &W::px_b}, {"e_a", &W::e_a},   {"e_b", &W::e_b},
        {"g_a", &W::g_a},   {"g_b", &W::g_b},   {"g_c", &W::g_c},
        {"g_d", &W::g_d},   {"x_a", &W::x_a},   {"x_b", &W::x_b},
        {"d_a", &W::d_a},   {"d_b", &W::d_b},   {"d_c", &W::d_c},
        {"h_a", &W::h_a},   {"h_b", &W::h_b},
    };
    set_by_table(*this, coefficient, value, table, "w3");
}

std::vector<CoefficientOverride> load_coefficient_overrides(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open coefficient file: " + path);

    std::vector<CoefficientOverride> out;
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("name,", 0) != 0)
                throw InputError(path + ": expected header 'name,coefficient,value'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        CoefficientOverride o;
        std::string value_str;
        if (!std::getline(ss, o.model, ',') ||
            !std::getline(ss, o.coefficient, ',') ||
            !std::getline(ss, value_str))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": malformed override row");
        try {
            o.value = std::stod(value_str);
        } catch (const std::exception&) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": bad value '" + value_str + "'");
        }
        out.push_back(std::move(o));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bowring

BowringModel::BowringModel(std::shared_ptr<const PropertyTable> props,
                           BowringCoefficients coeffs)
    : props_(std::move(props)), coeffs_(coeffs) {
    if (!props_) throw InputError("bowring: property table is null");
}

ValidityEnvelope BowringModel::envelope() const {
    // Published data ranges of the 1972 fit.
    return {{200.0, 19000.0},    // P [kPa]
            {136.0, 18600.0},    // G [kg/m2-s]
            {-1.0, 1.0},         // x_e
            {0.002, 0.045}};     // D [m]
}

ChfEstimate BowringModel::predict(const LocalState& state) const {
    require_physical(state, "bowring");
    const BowringCoefficients& k = coeffs_;

    const double d = state.d_he_m;           // [m]
    const double g = state.g_kgm2s;          // [kg/m2-s]
    const double hfg =
        props_->saturation(state.p_kpa).h_fg * 1000.0;  // [J/kg]
    const double pr = k.pr_per_mpa * state.p_kpa / 1000.0;

    double f1, f1_over_f2, f3;
    if (pr < 1.0) {
        f1 = (std::pow(pr, k.f1_pow) * std::exp(k.f1_rate * (1.0 - pr)) +
              k.f1_add) / k.f1_div;
        f1_over_f2 = (std::pow(pr, k.f12_pow) *
                          std::exp(k.f12_rate * (1.0 - pr)) + k.f12_add) /
                     k.f12_div;
        f3 = (std::pow(pr, k.f3_pow) * std::exp(k.f3_rate * (1.0 - pr)) +
              k.f3_add) / k.f3_div;
    } else {
        f1 = std::pow(pr, k.f1_hi_pow) * std::exp(k.f1_hi_rate * (1.0 - pr));
        f1_over_f2 = std::pow(pr, k.f12_hi_pow) *
                     std::exp(k.f12_hi_rate * (1.0 - pr));
        f3 = std::pow(pr, k.f3_hi_pow);
    }
    const double f2 = f1 / f1_over_f2;
    const double f4 = f3 * std::pow(pr, k.f4_pow);
    const double n = k.n_base - k.n_slope * pr;

    const double a = k.a_lead * (hfg * d * g / 4.0) * f1 /
                     (1.0 + k.a_denom * f2 * std::sqrt(d) * g);
    const double c = k.c_lead * f3 * d * g /
                     (1.0 + k.c_denom * f4 * std::pow(g / k.g_ref, n));
    if (!(c > 0.0))
        throw ModelError("bowring: non-positive denominator at P=" +
                         std::to_string(state.p_kpa) +
                         " kPa, G=" + std::to_string(state.g_kgm2s));

    const double q_wm2 = (a - 0.25 * d * g * hfg * state.x_e) / c;
    if (!std::isfinite(q_wm2) || q_wm2 <= 0.0)
        throw ModelError(
            "bowring: non-positive prediction at P=" +
            std::to_string(state.p_kpa) + " kPa, G=" +
            std::to_string(state.g_kgm2s) + " kg/m2-s, x_e=" +
            std::to_string(state.x_e));

    ChfEstimate est;
    est.chf_kwm2 = q_wm2 / 1000.0;
    est.extrapolated = outside(envelope(), state);
    return est;
}

// ---------------------------------------------------------------------------
// W-3

namespace {
// SI -> British engineering units used inside the W-3 fit.
constexpr double kKpaToPsia = 0.1450377377;
constexpr double kKgm2sToLbHrFt2 = 2.204622622 * 3600.0 / 10.76391042;
constexpr double kMToIn = 39.37007874;
constexpr double kBtuHrFt2ToWm2 = 3.154590745;
} // namespace

W3Model::W3Model(W3Coefficients coeffs) : coeffs_(coeffs) {}

ValidityEnvelope W3Model::envelope() const {
    // Classic W-3 ranges: 1000-2300 psia, 1.0-5.0 Mlb/hr-ft2,
    // x_e in [-0.15, 0.15], De 0.2-0.7 in.
    return {{6895.0, 15860.0},   // P [kPa]
            {1356.0, 6780.0},    // G [kg/m2-s]
            {-0.15, 0.15},       // x_e
            {0.005, 0.018}};     // D [m]
}

ChfEstimate W3Model::predict(const LocalState& state) const {
    require_physical(state, "w3");
    const W3Coefficients& k = coeffs_;

    const double p = state.p_kpa * kKpaToPsia;           // [psia]
    const double g = state.g_kgm2s * kKgm2sToLbHrFt2;    // [lb/hr-ft2]
    const double de = state.d_he_m * kMToIn;             // [in]
    const double x = state.x_e;

    const double t1 = (k.p_a - k.p_b * p) +
                      (k.px_a - k.px_b * p) * std::exp((k.e_a - k.e_b * p) * x);
    const double t2 =
        (k.g_a - k.g_b * x + k.g_c * x * std::abs(x)) * g / 1.0e6 + k.g_d;
    const double t3 = k.x_a - k.x_b * x;
    const double t4 = k.d_a + k.d_b * std::exp(-k.d_c * de);
    const double dh_sub = 0.0;  // local-conditions form: saturated inlet
    const double t5 = k.h_a + k.h_b * dh_sub;

    const double q_mbtu = t1 * t2 * t3 * t4 * t5;  // [MBtu/hr-ft2]
    const double q_kwm2 = q_mbtu * 1.0e6 * kBtuHrFt2ToWm2 / 1000.0;
    if (!std::isfinite(q_kwm2) || q_kwm2 <= 0.0)
        throw ModelError(
            "w3: non-positive prediction at P=" + std::to_string(state.p_kpa) +
            " kPa, G=" + std::to_string(state.g_kgm2s) + " kg/m2-s, x_e=" +
            std::to_string(state.x_e));

    ChfEstimate est;
    est.chf_kwm2 = q_kwm2;
    est.extrapolated = outside(envelope(), state);
    return est;
}

} // namespace chf
