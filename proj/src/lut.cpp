#include "chf/lut.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "chf/errors.hpp"

namespace chf {
namespace {

std::string triple(double p, double g, double x) {
    std::ostringstream ss;
    ss << "(" << p << ", " << g << ", " << x << ")";
    return ss.str();
}

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2)
        throw InputError(std::string("lut: axis ") + name +
                         " needs at least 2 knots");
    for (size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1]))
            throw InputError(std::string("lut: axis ") + name +
                             " not strictly increasing");
}

// Bracketing cell with clamping: returns lower index, upper index and the
// fractional coordinate; i0 == i1 with t = 0 for knots and clamped queries.
struct Bracket {
    size_t i0, i1;
    double t;
    bool clamped;
};

Bracket locate(const std::vector<double>& axis, double q) {
    if (q <= axis.front()) return {0, 0, 0.0, q < axis.front()};
    if (q >= axis.back()) {
        const size_t last = axis.size() - 1;
        return {last, last, 0.0, q > axis.back()};
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), q);
    const size_t hi = static_cast<size_t>(it - axis.begin());
    const size_t lo = hi - 1;
    if (q == axis[lo]) return {lo, lo, 0.0, false};
    return {lo, hi, (q - axis[lo]) / (axis[hi] - axis[lo]), false};
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

} // namespace

LookupTable LookupTable::from_grid(std::vector<double> p_axis,
                                   std::vector<double> g_axis,
                                   std::vector<double> x_axis,
                                   std::vector<double> values) {
    check_axis(p_axis, "P");
    check_axis(g_axis, "G");
    check_axis(x_axis, "x");
    if (values.size() != p_axis.size() * g_axis.size() * x_axis.size())
        throw InputError("lut: value count does not match axis dimensions");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InputError("lut: non-positive CHF value in grid");

    LookupTable t;
    t.p_ = std::move(p_axis);
    t.g_ = std::move(g_axis);
    t.x_ = std::move(x_axis);
    t.values_ = std::move(values);
    return t;
}

LookupTable LookupTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lookup table: " + path);

    struct Row {
        double p, g, x, v;
    };
    std::vector<Row> rows;
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("P_kPa,", 0) != 0)
                throw InputError(path +
                                 ": expected header 'P_kPa,G_kgm2s,x,chf_kWm2'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        Row r;
        char c1, c2, c3;
        if (!(ss >> r.p >> c1 >> r.g >> c2 >> r.x >> c3 >> r.v) || c1 != ',' ||
            c2 != ',' || c3 != ',')
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": malformed grid row");
        if (!(r.v > 0.0) || !std::isfinite(r.v))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": non-positive CHF at " + triple(r.p, r.g, r.x));
        rows.push_back(r);
    }
    if (rows.empty()) throw InputError(path + ": empty lookup table");

    auto collect = [](const std::vector<Row>& rs, double Row::*field) {
        std::vector<double> axis;
        for (const auto& r : rs) axis.push_back(r.*field);
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        return axis;
    };
    const std::vector<double> p_axis = collect(rows, &Row::p);
    const std::vector<double> g_axis = collect(rows, &Row::g);
    const std::vector<double> x_axis = collect(rows, &Row::x);

    auto index_of = [](const std::vector<double>& axis, double v) {
        return static_cast<size_t>(
            std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
    };

    const double unset = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values(p_axis.size() * g_axis.size() * x_axis.size(),
                               unset);
    for (const auto& r : rows) {
        const size_t idx =
            (index_of(p_axis, r.p) * g_axis.size() + index_of(g_axis, r.g)) *
                x_axis.size() +
            index_of(x_axis, r.x);
        if (!std::isnan(values[idx]))
            throw InputError(path + ": duplicate grid cell at " +
                             triple(r.p, r.g, r.x));
        values[idx] = r.v;
    }
    for (size_t ip = 0; ip < p_axis.size(); ++ip)
        for (size_t ig = 0; ig < g_axis.size(); ++ig)
            for (size_t ix = 0; ix < x_axis.size(); ++ix) {
                const size_t idx =
                    (ip * g_axis.size() + ig) * x_axis.size() + ix;
                if (std::isnan(values[idx]))
                    throw InputError(
                        path + ": incomplete grid at " +
                        triple(p_axis[ip], g_axis[ig], x_axis[ix]));
            }

    return from_grid(p_axis, g_axis, x_axis, std::move(values));
}

LookupTable::Sample LookupTable::interpolate(double p_kpa, double g_kgm2s,
                                             double x_e) const {
    const Bracket bp = locate(p_, p_kpa);
    const Bracket bg = locate(g_, g_kgm2s);
    const Bracket bx = locate(x_, x_e);

    auto v = [this](const Bracket& a, const Bracket& b, const Bracket& c,
                    bool a_hi, bool b_hi, bool c_hi) {
        return at(a_hi ? a.i1 : a.i0, b_hi ? b.i1 : b.i0, c_hi ? c.i1 : c.i0);
    };
    const double c00 = lerp(v(bp, bg, bx, false, false, false),
                            v(bp, bg, bx, false, false, true), bx.t);
    const double c01 = lerp(v(bp, bg, bx, false, true, false),
                            v(bp, bg, bx, false, true, true), bx.t);
    const double c10 = lerp(v(bp, bg, bx, true, false, false),
                            v(bp, bg, bx, true, false, true), bx.t);
    const double c11 = lerp(v(bp, bg, bx, true, true, false),
                            v(bp, bg, bx, true, true, true), bx.t);
    const double c0 = lerp(c00, c01, bg.t);
    const double c1 = lerp(c10, c11, bg.t);
    return {lerp(c0, c1, bp.t), bp.clamped || bg.clamped || bx.clamped};
}

double DiameterCorrection::factor(double d_he_m) const {
    const double d = std::clamp(d_he_m, d_min, d_max);
    const double ratio = reference_d / d;
    // sqrt is correctly rounded; preserves exact factors like 0.5 and 1.
    if (exponent == 0.5) return std::sqrt(ratio);
    return std::pow(ratio, exponent);
}

ChfEstimate lut_predict(const LookupTable& table,
                        const DiameterCorrection& corr,
                        const LocalState& state) {
    const LookupTable::Sample s =
        table.interpolate(state.p_kpa, state.g_kgm2s, state.x_e);
    ChfEstimate est;
    est.chf_kwm2 = s.chf_kwm2 * corr.factor(state.d_he_m);
    est.extrapolated =
        s.clamped || state.d_he_m < corr.d_min || state.d_he_m > corr.d_max;
    return est;
}

LutModel::LutModel(std::shared_ptr<const LookupTable> table,
                   DiameterCorrection corr)
    : table_(std::move(table)), corr_(corr) {
    if (!table_) throw InputError("lut: table is null");
}

ChfEstimate LutModel::predict(const LocalState& state) const {
    return lut_predict(*table_, corr_, state);
}

ValidityEnvelope LutModel::envelope() const {
    return {{table_->p_axis().front(), table_->p_axis().back()},
            {table_->g_axis().front(), table_->g_axis().back()},
            {table_->x_axis().front(), table_->x_axis().back()},
            {corr_.d_min, corr_.d_max}};
}

} // namespace chf
