#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chf/model.hpp"

namespace chf {

/// Dense 3-D CHF grid over (P, G, x_e) at the 0.008 m reference diameter.
class LookupTable {
public:
    /// Loads a CSV grid (`P_kPa,G_kgm2s,x,chf_kWm2`, any row order, `#`
    /// comments). The rows must form a complete Cartesian product of the
    /// axis values, each cell exactly once.
    static LookupTable load(const std::string& path);

    /// Builds a table from explicit axes and a row-major value array
    /// (P outermost, x innermost).
    static LookupTable from_grid(std::vector<double> p_axis,
                                 std::vector<double> g_axis,
                                 std::vector<double> x_axis,
                                 std::vector<double> values);

    struct Sample {
        double chf_kwm2;
        bool clamped;   // query left the grid box on some axis
    };

    /// Trilinear interpolation; out-of-box coordinates are clamped to the
    /// boundary and flagged. Exact at grid nodes.
    Sample interpolate(double p_kpa, double g_kgm2s, double x_e) const;

    const std::vector<double>& p_axis() const { return p_; }
    const std::vector<double>& g_axis() const { return g_; }
    const std::vector<double>& x_axis() const { return x_; }
    size_t size() const { return values_.size(); }
    double at(size_t ip, size_t ig, size_t ix) const {
        return values_[(ip * g_.size() + ig) * x_.size() + ix];
    }

private:
    LookupTable() = default;
    std::vector<double> p_, g_, x_;
    std::vector<double> values_;   // row-major, x fastest
};

/// Heated-diameter correction K = (reference_d / D_he)^exponent with D_he
/// clamped to [d_min, d_max] before exponentiation. K(reference_d) = 1.
struct DiameterCorrection {
    double reference_d = 0.008;   // [m]
    double exponent = 0.5;
    double d_min = 0.002;         // [m]
    double d_max = 0.045;         // [m]

    double factor(double d_he_m) const;
};

/// Interpolates the table at the state's (P, G, x_e) and applies the
/// diameter correction. Clamping on any axis sets the extrapolated flag.
ChfEstimate lut_predict(const LookupTable& table,
                        const DiameterCorrection& corr,
                        const LocalState& state);

/// Lookup-table CHF model: the table box is its validity envelope.
class LutModel final : public ChfModel {
public:
    explicit LutModel(std::shared_ptr<const LookupTable> table,
                      DiameterCorrection corr = {});

    std::string name() const override { return "lut"; }
    ChfEstimate predict(const LocalState& state) const override;
    ValidityEnvelope envelope() const override;

    const LookupTable& table() const { return *table_; }
    const DiameterCorrection& correction() const { return corr_; }

private:
    std::shared_ptr<const LookupTable> table_;
    DiameterCorrection corr_;
};

} // namespace chf
