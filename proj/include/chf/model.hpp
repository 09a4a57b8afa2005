#pragma once

#include <string>
#include <vector>

#include "chf/state.hpp"

namespace chf {

/// Closed min/max box per input axis. Used to flag extrapolation, not
/// to refuse evaluation.
struct ValidityEnvelope {
    struct Range {
        double lo;
        double hi;
        bool contains(double v) const { return v >= lo && v <= hi; }
    };
    Range p_kpa;
    Range g_kgm2s;
    Range x_e;
    Range d_he_m;
};

/// A CHF prediction plus bookkeeping flags. The value is never clipped;
/// callers decide what a flagged result means for them.
struct ChfEstimate {
    double chf_kwm2 = 0.0;
    bool extrapolated = false;   // state left the model's envelope / grid box
    bool non_positive = false;   // value <= 0 (possible for ML-backed models)
};

/// Uniform prediction interface satisfied by correlations, the lookup
/// table, pure-ML models, and hybrids. Implementations are immutable
/// after construction; predict is a pure function of the state.
class ChfModel {
public:
    virtual ~ChfModel() = default;

    virtual std::string name() const = 0;

    /// Predicted CHF [kW/m2] at the given local state.
    virtual ChfEstimate predict(const LocalState& state) const = 0;

    virtual ValidityEnvelope envelope() const = 0;
};

/// One axis of a state that exits a model's envelope.
struct EnvelopeViolation {
    std::string axis;   // "P", "G", "x_e", or "D_he"
    double value;
    double lo;
    double hi;
};

/// Lists every axis where the state exits the model's envelope. An
/// empty result means the state is in range.
std::vector<EnvelopeViolation> check_envelope(const ChfModel& model,
                                              const LocalState& state);

} // namespace chf
