#include "chf/subchannel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chf/errors.hpp"

namespace chf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Homogeneous-equilibrium mixture density [kg/m3] at (P, h).
double hem_density(const SatProps& sat, double h_kjkg) {
    const double x = equilibrium_quality(h_kjkg, sat);
    if (x <= 0.0) return sat.rho_f;
    if (x >= 1.0) return sat.rho_g;
    return 1.0 / ((1.0 - x) / sat.rho_f + x / sat.rho_g);
}

} // namespace

void BundleCase::validate() const {
    if (name.empty()) throw InputError("case: missing name");
    if (channels.empty()) throw InputError("case '" + name + "': no channels");
    if (n_axial < 2)
        throw InputError("case '" + name + "': n_axial must be >= 2");
    if (!(heated_length_m > 0.0))
        throw InputError("case '" + name + "': heated_length must be > 0");
    if (!(l_obs_m >= 0.0 && l_obs_m <= heated_length_m))
        throw InputError("case '" + name + "': l_obs outside [0, L]");
    if (!(p_in_kpa > 0.0))
        throw InputError("case '" + name + "': inlet pressure must be > 0");
    if (!(g_in_kgm2s > 0.0))
        throw InputError("case '" + name + "': inlet mass flux must be > 0");
    if (!(power_kw >= 0.0))
        throw InputError("case '" + name + "': power must be >= 0");
    if (!(beta_sp >= 0.0))
        throw InputError("case '" + name + "': beta must be >= 0");
    if (!(friction >= 0.0))
        throw InputError("case '" + name + "': friction must be >= 0");

    for (size_t c = 0; c < channels.size(); ++c) {
        const ChannelGeometry& ch = channels[c];
        if (!(ch.area_m2 > 0.0) || !(ch.heated_perim_m > 0.0) ||
            !(ch.wetted_perim_m > 0.0))
            throw InputError("case '" + name + "': channel " +
                             std::to_string(c) +
                             " needs positive area and perimeters");
    }
    for (const Gap& g : gaps) {
        if (g.i >= channels.size() || g.j >= channels.size() || g.i == g.j)
            throw InputError("case '" + name + "': gap references invalid "
                             "channel pair");
        if (!(g.width_m > 0.0))
            throw InputError("case '" + name + "': gap width must be > 0");
    }
    for (size_t r = 0; r < rods.size(); ++r)
        if (!(rods[r].peaking > 0.0))
            throw InputError("case '" + name + "': rod " + std::to_string(r) +
                             " needs positive peaking");

    std::vector<double> frac_sum(rods.size(), 0.0);
    for (const RodSurface& s : rod_surfaces) {
        if (s.rod >= rods.size())
            throw InputError("case '" + name + "': rod surface references "
                             "unknown rod " + std::to_string(s.rod));
        if (s.channel >= channels.size())
            throw InputError("case '" + name + "': rod surface references "
                             "unknown channel " + std::to_string(s.channel));
        if (!(s.fraction > 0.0))
            throw InputError("case '" + name +
                             "': rod surface fraction must be > 0");
        frac_sum[s.rod] += s.fraction;
    }
    for (size_t r = 0; r < rods.size(); ++r)
        if (std::abs(frac_sum[r] - 1.0) > 1e-9)
            throw InputError("case '" + name + "': rod " + std::to_string(r) +
                             " surface fractions sum to " +
                             std::to_string(frac_sum[r]) + ", expected 1");

    for (const Spacer& s : spacers)
        if (!(s.elevation_m >= 0.0 && s.elevation_m <= heated_length_m) ||
            !(s.k_loss >= 0.0))
            throw InputError("case '" + name + "': spacer outside [0, L] or "
                             "negative loss");
}

std::vector<double> BundleCase::channel_heat_flux() const {
    double peak_sum = 0.0;
    for (const Rod& r : rods) peak_sum += r.peaking;

    std::vector<double> channel_power(channels.size(), 0.0);   // [kW]
    for (const RodSurface& s : rod_surfaces) {
        const double rod_power = power_kw * rods[s.rod].peaking / peak_sum;
        channel_power[s.channel] += rod_power * s.fraction;
    }

    std::vector<double> qpp(channels.size(), 0.0);
    for (size_t c = 0; c < channels.size(); ++c)
        qpp[c] = channel_power[c] /
                 (channels[c].heated_perim_m * heated_length_m);
    return qpp;
}

double mix_step(double h_i_kjkg, double h_j_kjkg, double g_i_kgm2s,
                double g_j_kgm2s, double gap_m, double beta_sp, double dz_m) {
    const double g_mean = 0.5 * (g_i_kgm2s + g_j_kgm2s);
    // w' = beta * gap * G_mean [kg/m-s]; energy moved over dz [kW]
    return dz_m * beta_sp * gap_m * g_mean * (h_j_kjkg - h_i_kjkg);
}

MarchResult march(const BundleCase& bundle, const PropertyTable& props) {
    bundle.validate();
    const size_t nc = bundle.channels.size();
    const int nz = bundle.n_axial;
    const double dz = bundle.heated_length_m / nz;
    const std::vector<double> qpp = bundle.channel_heat_flux();

    // Mass flow per channel [kg/s]; constant (no redistribution).
    std::vector<double> mflow(nc);
    for (size_t c = 0; c < nc; ++c)
        mflow[c] = bundle.g_in_kgm2s * bundle.channels[c].area_m2;

    // Spacer losses binned to their nearest cell-center node.
    std::vector<double> spacer_k(nz, 0.0);
    for (const Spacer& s : bundle.spacers) {
        int k = static_cast<int>(std::lround(s.elevation_m / dz - 0.5));
        k = std::clamp(k, 0, nz - 1);
        spacer_k[k] += s.k_loss;
    }

    std::vector<double> h(nc, bundle.h_in_kjkg);
    std::vector<double> p(nc, bundle.p_in_kpa);

    MarchResult out;
    out.channels.assign(nc, {});
    for (auto& v : out.channels) v.reserve(nz);
    out.total_power_kw = bundle.power_kw;
    out.inlet_energy_kw = 0.0;
    for (size_t c = 0; c < nc; ++c)
        out.inlet_energy_kw += mflow[c] * bundle.h_in_kjkg;

    // One marching increment of length `len` ending at elevation z_end;
    // node < 0 marks the final half-step to the outlet.
    auto advance = [&](double len, int node) {
        // Mixing from a start-of-step snapshot keeps the exchange
        // antisymmetric regardless of gap order.
        const std::vector<double> h_snap = h;
        for (const Gap& gp : bundle.gaps) {
            const double ex =
                mix_step(h_snap[gp.i], h_snap[gp.j], bundle.g_in_kgm2s,
                         bundle.g_in_kgm2s, gp.width_m, bundle.beta_sp, len);
            h[gp.i] += ex / mflow[gp.i];
            h[gp.j] -= ex / mflow[gp.j];
        }
        for (size_t c = 0; c < nc; ++c) {
            const ChannelGeometry& geo = bundle.channels[c];
            h[c] += qpp[c] * geo.heated_perim_m * len / mflow[c];

            SatProps sat;
            try {
                sat = props.saturation(p[c]);
            } catch (const RangeError& e) {
                throw SolverError(
                    "case '" + bundle.name + "': property range exceeded in "
                    "channel " + std::to_string(c) + " at node " +
                    std::to_string(node) + ": " + e.what());
            }
            const double rho = hem_density(sat, h[c]);
            const double g = bundle.g_in_kgm2s;
            double dp_pa = bundle.friction / geo.d_hy_m() * len * g * g /
                           (2.0 * rho);
            if (node >= 0) dp_pa += spacer_k[node] * g * g / (2.0 * rho);
            p[c] -= dp_pa / 1000.0;
            if (!(p[c] > 0.0))
                throw SolverError("case '" + bundle.name +
                                  "': pressure fell to zero in channel " +
                                  std::to_string(c) + " at node " +
                                  std::to_string(node));

            if (node >= 0) {
                SatProps sat_local;
                try {
                    sat_local = props.saturation(p[c]);
                } catch (const RangeError& e) {
                    throw SolverError(
                        "case '" + bundle.name + "': property range exceeded "
                        "in channel " + std::to_string(c) + " at node " +
                        std::to_string(node) + ": " + e.what());
                }
                NodeState ns;
                ns.z_m = (node + 0.5) * dz;
                ns.p_kpa = p[c];
                ns.g_kgm2s = g;
                ns.h_kjkg = h[c];
                ns.x_e = equilibrium_quality(h[c], sat_local);
                ns.qpp_kwm2 = qpp[c];
                out.channels[c].push_back(ns);
            }
        }
    };

    advance(0.5 * dz, 0);                       // inlet -> first center
    for (int k = 1; k < nz; ++k) advance(dz, k);
    advance(0.5 * dz, -1);                      // last center -> outlet

    out.outlet_h_kjkg = h;
    out.outlet_energy_kw = 0.0;
    for (size_t c = 0; c < nc; ++c)
        out.outlet_energy_kw += mflow[c] * h[c];
    return out;
}

std::vector<ChannelProfile> evaluate_chf(const BundleCase& bundle,
                                         const MarchResult& marched,
                                         const ChfModel& model) {
    std::vector<ChannelProfile> out(marched.channels.size());
    for (size_t c = 0; c < marched.channels.size(); ++c) {
        const auto& nodes = marched.channels[c];
        ChannelProfile& prof = out[c];
        prof.nodes = nodes;
        prof.chf_kwm2.reserve(nodes.size());
        prof.dnbr.reserve(nodes.size());
        const double d_he = bundle.channels[c].d_he_m();
        for (size_t k = 0; k < nodes.size(); ++k) {
            const LocalState state{d_he, nodes[k].p_kpa, nodes[k].g_kgm2s,
                                   nodes[k].x_e};
            const ChfEstimate est = model.predict(state);
            if (est.non_positive || !(est.chf_kwm2 > 0.0))
                throw SolverError(
                    "case '" + bundle.name + "': model '" + model.name() +
                    "' predicted non-positive CHF at node " +
                    std::to_string(k) + " (z=" + std::to_string(nodes[k].z_m) +
                    " m) in channel " + std::to_string(c));
            prof.chf_kwm2.push_back(est.chf_kwm2);
            prof.dnbr.push_back(nodes[k].qpp_kwm2 > 0.0
                                    ? est.chf_kwm2 / nodes[k].qpp_kwm2
                                    : kInf);
        }
    }
    return out;
}

CriticalPoint find_critical(const std::vector<double>& z_m,
                            const std::vector<double>& dnbr) {
    if (z_m.size() != dnbr.size() || z_m.empty())
        throw InputError("find_critical: mismatched or empty profiles");
    CriticalPoint cp;
    if (dnbr[0] < 1.0) {
        cp.found = true;
        cp.l_cr_m = 0.0;
        cp.inlet_chf = true;
        return cp;
    }
    for (size_t k = 1; k < dnbr.size(); ++k) {
        if (dnbr[k - 1] >= 1.0 && dnbr[k] < 1.0) {
            const double t = (dnbr[k - 1] - 1.0) / (dnbr[k - 1] - dnbr[k]);
            cp.found = true;
            cp.l_cr_m = z_m[k - 1] + t * (z_m[k] - z_m[k - 1]);
            return cp;
        }
    }
    return cp;
}

double magnitude_at(const std::vector<double>& z_m,
                    const std::vector<double>& chf_kwm2, double l_obs_m) {
    if (z_m.size() != chf_kwm2.size() || z_m.empty())
        throw InputError("magnitude_at: mismatched or empty profiles");
    if (l_obs_m <= z_m.front()) return chf_kwm2.front();
    if (l_obs_m >= z_m.back()) return chf_kwm2.back();
    const auto it = std::upper_bound(z_m.begin(), z_m.end(), l_obs_m);
    const size_t hi = static_cast<size_t>(it - z_m.begin());
    const size_t lo = hi - 1;
    if (l_obs_m == z_m[lo]) return chf_kwm2[lo];
    const double t = (l_obs_m - z_m[lo]) / (z_m[hi] - z_m[lo]);
    return chf_kwm2[lo] + t * (chf_kwm2[hi] - chf_kwm2[lo]);
}

CaseResult solve_case(const BundleCase& bundle, const PropertyTable& props,
                      const ChfModel& model) {
    const MarchResult marched = march(bundle, props);
    CaseResult res;
    res.profile = evaluate_chf(bundle, marched, model);

    res.min_dnbr = kInf;
    for (size_t c = 0; c < res.profile.size(); ++c) {
        for (double d : res.profile[c].dnbr) {
            if (d < res.min_dnbr) {
                res.min_dnbr = d;
                res.limiting_channel = c;
            }
        }
    }

    const ChannelProfile& lim = res.profile[res.limiting_channel];
    std::vector<double> z;
    z.reserve(lim.nodes.size());
    for (const NodeState& n : lim.nodes) z.push_back(n.z_m);
    res.critical = find_critical(z, lim.dnbr);
    res.chf_at_obs_kwm2 = magnitude_at(z, lim.chf_kwm2, bundle.l_obs_m);
    return res;
}

std::vector<BetaPoint> beta_sensitivity(const BundleCase& bundle,
                                        const PropertyTable& props,
                                        const ChfModel& model,
                                        const std::vector<double>& betas) {
    std::vector<BetaPoint> out;
    out.reserve(betas.size());
    for (double beta : betas) {
        if (!(beta >= 0.0))
            throw InputError("beta_sensitivity: beta must be >= 0");
        BundleCase variant = bundle;
        variant.beta_sp = beta;
        const CaseResult r = solve_case(variant, props, model);
        out.push_back({beta, r.chf_at_obs_kwm2, r.critical.found,
                       r.critical.l_cr_m});
    }
    return out;
}

} // namespace chf
