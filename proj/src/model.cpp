#include "chf/model.hpp"

namespace chf {

std::vector<EnvelopeViolation> check_envelope(const ChfModel& model,
                                              const LocalState& state) {
    const ValidityEnvelope env = model.envelope();
    std::vector<EnvelopeViolation> out;
    auto check = [&out](const char* axis, double v,
                        const ValidityEnvelope::Range& r) {
        if (!r.contains(v)) out.push_back({axis, v, r.lo, r.hi});
    };
    check("P", state.p_kpa, env.p_kpa);
    check("G", state.g_kgm2s, env.g_kgm2s);
    check("x_e", state.x_e, env.x_e);
    check("D_he", state.d_he_m, env.d_he_m);
    return out;
}

} // namespace chf
