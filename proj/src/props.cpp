#include "chf/props.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chf/errors.hpp"

namespace chf {

namespace {

std::vector<double> parse_row(const std::string& line, int lineno,
                              const std::string& path) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(cell, &pos));
            while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": malformed value '" + cell + "'");
        }
    }
    return vals;
}

} // namespace

PropertyTable PropertyTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open property table '" + path + "'");

    std::vector<SatProps> rows;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("P_kPa,", 0) != 0) {
                throw InputError(path + ":" + std::to_string(lineno) +
                                 ": expected header starting with 'P_kPa,'");
            }
            header_seen = true;
            continue;
        }
        auto v = parse_row(line, lineno, path);
        if (v.size() != 6) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected 6 columns, got " + std::to_string(v.size()));
        }
        SatProps row{v[0], v[1], v[2], v[3], v[4], v[5]};
        if (!rows.empty() && row.p_kpa <= rows.back().p_kpa) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": non-monotone pressure (" + std::to_string(row.p_kpa) +
                             " after " + std::to_string(rows.back().p_kpa) + ")");
        }
        if (row.h_fg < 0.0 || row.rho_f <= row.rho_g || row.rho_g <= 0.0) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": non-physical saturation row");
        }
        rows.push_back(row);
    }
    return from_rows(std::move(rows));
}

PropertyTable PropertyTable::from_rows(std::vector<SatProps> rows) {
    if (rows.size() < 2) {
        throw InputError("property table: insufficient rows (" +
                         std::to_string(rows.size()) + ", need at least 2)");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].p_kpa <= rows[i - 1].p_kpa) {
            throw InputError("property table: non-monotone pressure at row " +
                             std::to_string(i));
        }
    }
    PropertyTable t;
    t.rows_ = std::move(rows);
    return t;
}

SatProps PropertyTable::saturation(double p_kpa) const {
    if (p_kpa < p_min() || p_kpa > p_max()) {
        throw RangeError("pressure " + std::to_string(p_kpa) +
                         " kPa outside property table range [" +
                         std::to_string(p_min()) + ", " + std::to_string(p_max()) + "]");
    }
    // binary search for the bracketing segment, then linear blend
    auto it = std::upper_bound(rows_.begin(), rows_.end(), p_kpa,
                               [](double p, const SatProps& r) { return p < r.p_kpa; });
    std::size_t hi = static_cast<std::size_t>(it - rows_.begin());
    if (hi == rows_.size()) --hi;
    if (hi == 0) ++hi;
    const SatProps& a = rows_[hi - 1];
    const SatProps& b = rows_[hi];
    if (p_kpa == a.p_kpa) return a;
    if (p_kpa == b.p_kpa) return b;
    const double w = (p_kpa - a.p_kpa) / (b.p_kpa - a.p_kpa);
    auto mix = [w](double u, double v) { return u + w * (v - u); };
    return SatProps{p_kpa,
                    mix(a.h_f, b.h_f),
                    mix(a.h_fg, b.h_fg),
                    mix(a.rho_f, b.rho_f),
                    mix(a.rho_g, b.rho_g),
                    mix(a.t_sat, b.t_sat)};
}

double equilibrium_quality(double h_kjkg, const SatProps& sat) {
    if (sat.h_fg == 0.0) {
        throw ModelError("equilibrium quality singular: h_fg = 0 at P = " +
                         std::to_string(sat.p_kpa) + " kPa");
    }
    return (h_kjkg - sat.h_f) / sat.h_fg;
}

} // namespace chf
