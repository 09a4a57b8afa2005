#pragma once

#include <string>
#include <vector>

#include "chf/model.hpp"
#include "chf/props.hpp"
#include "chf/state.hpp"

namespace chf {

/// Cross-section of one flow channel.
struct ChannelGeometry {
    double area_m2;
    double heated_perim_m;
    double wetted_perim_m;

    double d_he_m() const { return 4.0 * area_m2 / heated_perim_m; }
    double d_hy_m() const { return 4.0 * area_m2 / wetted_perim_m; }
};

/// Mixing connection between two channels.
struct Gap {
    size_t i;
    size_t j;
    double width_m;
};

struct Rod {
    double peaking;   // radial peaking factor, > 0
};

/// Fraction of one rod's perimeter (and therefore power) facing a channel.
struct RodSurface {
    size_t rod;
    size_t channel;
    double fraction;
};

struct Spacer {
    double elevation_m;
    double k_loss;   // form-loss coefficient, applied at the nearest node
};

/// Complete description of a tube or bundle run. Loaded from a sectioned
/// text file; see BundleCase::load.
struct BundleCase {
    std::string name;
    std::vector<ChannelGeometry> channels;
    std::vector<Gap> gaps;
    std::vector<Rod> rods;
    std::vector<RodSurface> rod_surfaces;
    std::vector<Spacer> spacers;

    double heated_length_m = 0.0;
    int n_axial = 0;
    double l_obs_m = 0.0;         // observed critical elevation [m]
    double p_in_kpa = 0.0;
    double g_in_kgm2s = 0.0;      // inlet mass flux, every channel
    double h_in_kjkg = 0.0;
    double power_kw = 0.0;        // bundle total, uniform axial profile
    double beta_sp = 0.0;         // single-phase mixing coefficient
    double friction = 0.02;       // Darcy friction factor (fixed)
    bool synthetic = false;       // operating conditions are placeholders
    double exp_chf_kwm2 = 0.0;    // measured CHF at l_obs; 0 when unknown

    /// Parses a sectioned case file: `[case]`/`[inlet]` hold `key value`
    /// pairs; `[spacers]`, `[channels]`, `[gaps]`, `[rods]`,
    /// `[rod_surfaces]` hold one whitespace-separated row per entry.
    /// `#` comments allowed. Validates on return.
    static BundleCase load(const std::string& path);

    /// Checks index ranges, positivity, spacer elevations, and that every
    /// rod's surface fractions sum to 1 (power is never lost).
    void validate() const;

    /// Wall heat flux per channel [kW/m2]; constant along z (uniform
    /// axial profile). Rod power is power_kw weighted by peaking.
    std::vector<double> channel_heat_flux() const;
};

/// Thermal state at one axial cell center.
struct NodeState {
    double z_m;
    double p_kpa;
    double g_kgm2s;
    double h_kjkg;
    double x_e;
    double qpp_kwm2;
};

struct MarchResult {
    std::vector<std::vector<NodeState>> channels;   // [channel][node]
    std::vector<double> outlet_h_kjkg;              // at z = L exactly
    double inlet_energy_kw;    // sum of G*A*h at z = 0
    double outlet_energy_kw;   // sum of G*A*h at z = L
    double total_power_kw;
};

/// Turbulent-mixing energy exchange [kW] added to channel i and removed
/// from channel j over one axial step: dz * beta * gap * mean(G) * (h_j - h_i).
double mix_step(double h_i_kjkg, double h_j_kjkg, double g_i_kgm2s,
                double g_j_kgm2s, double gap_m, double beta_sp, double dz_m);

/// Steady-state axial march on cell-centered nodes z_k = (k+1/2)*dz,
/// dz = L/n. Enthalpy rises by wall heating plus gap mixing; pressure
/// falls by Darcy friction on the hydraulic diameter plus spacer form
/// losses at their nearest nodes. Mass flux per channel is constant
/// (no redistribution). A final half-step to z = L feeds the energy audit.
MarchResult march(const BundleCase& bundle, const PropertyTable& props);

/// One channel's marched nodes with CHF predictions and DNBR attached.
struct ChannelProfile {
    std::vector<NodeState> nodes;
    std::vector<double> chf_kwm2;
    std::vector<double> dnbr;      // +inf where the channel is unheated
};

/// Runs the model at every node of every channel; DNBR = CHF / q''.
/// A non-positive prediction is a SolverError naming node and model.
std::vector<ChannelProfile> evaluate_chf(const BundleCase& bundle,
                                         const MarchResult& marched,
                                         const ChfModel& model);

/// First downward crossing of DNBR = 1, linearly interpolated.
struct CriticalPoint {
    bool found = false;
    double l_cr_m = 0.0;
    bool inlet_chf = false;   // DNBR < 1 already at the first node
};

CriticalPoint find_critical(const std::vector<double>& z_m,
                            const std::vector<double>& dnbr);

/// CHF linearly interpolated at elevation l_obs between cell centers
/// (clamped to the first/last center outside their span).
double magnitude_at(const std::vector<double>& z_m,
                    const std::vector<double>& chf_kwm2, double l_obs_m);

struct CaseResult {
    size_t limiting_channel = 0;   // attains the global minimum DNBR
    double min_dnbr = 0.0;
    CriticalPoint critical;
    double chf_at_obs_kwm2 = 0.0;  // in the limiting channel, at l_obs
    std::vector<ChannelProfile> profile;
};

CaseResult solve_case(const BundleCase& bundle, const PropertyTable& props,
                      const ChfModel& model);

struct BetaPoint {
    double beta_sp;
    double chf_at_obs_kwm2;
    bool critical_found;
    double l_cr_m;   // meaningful when critical_found
};

/// Full solve per beta value; rows in input order.
std::vector<BetaPoint> beta_sensitivity(const BundleCase& bundle,
                                        const PropertyTable& props,
                                        const ChfModel& model,
                                        const std::vector<double>& betas);

} // namespace chf
