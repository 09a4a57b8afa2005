#pragma once

namespace chf {

/// Local thermal-hydraulic state at one axial node. All CHF models in
/// this library are functions of exactly these four quantities.
struct LocalState {
    double d_he_m;   // heated equivalent diameter [m]
    double p_kpa;    // pressure [kPa]
    double g_kgm2s;  // mass flux [kg/m2-s]
    double x_e;      // equilibrium quality [-], negative when subcooled
};

} // namespace chf
