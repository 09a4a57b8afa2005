#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace chf {

/// Saturated water/steam properties at one pressure.
struct SatProps {
    double p_kpa;    // pressure [kPa]
    double h_f;      // saturated liquid enthalpy [kJ/kg]
    double h_fg;     // latent heat of vaporization [kJ/kg]
    double rho_f;    // saturated liquid density [kg/m3]
    double rho_g;    // saturated vapor density [kg/m3]
    double t_sat;    // saturation temperature [K]
};

/// Piecewise-linear saturation table over pressure. Immutable after
/// load; safe for concurrent reads.
///
/// File format: CSV with header
///   P_kPa,hf_kJkg,hfg_kJkg,rhof_kgm3,rhog_kgm3,Tsat_K
/// Comment lines start with '#'. Rows must be strictly increasing in P.
class PropertyTable {
public:
    static PropertyTable load(const std::string& path);

    /// Build from in-memory rows (rows must be sorted strictly
    /// increasing in P; at least two rows).
    static PropertyTable from_rows(std::vector<SatProps> rows);

    /// Linear interpolation of every field at pressure p_kpa.
    /// Throws RangeError outside [p_min, p_max]; never extrapolates.
    SatProps saturation(double p_kpa) const;

    double p_min() const { return rows_.front().p_kpa; }
    double p_max() const { return rows_.back().p_kpa; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<SatProps>& rows() const { return rows_; }

private:
    PropertyTable() = default;
    std::vector<SatProps> rows_;
};

/// Equilibrium quality x_e = (h - h_f) / h_fg. May be negative
/// (subcooled) or above one. Throws ModelError when h_fg is zero.
double equilibrium_quality(double h_kjkg, const SatProps& sat);

} // namespace chf
