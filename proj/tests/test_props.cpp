#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "chf/errors.hpp"
#include "chf/props.hpp"

using namespace chf;

namespace {

const std::string kTable = std::string(CHF_DATA_DIR) + "/water_sat.csv";

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("bundled saturation table loads and spans the working range") {
    const PropertyTable t = PropertyTable::load(kTable);
    CHECK(t.size() >= 40);
    CHECK(t.p_min() == doctest::Approx(100.0));
    CHECK(t.p_max() == doctest::Approx(21000.0));
}

TEST_CASE("interpolation is exact at every knot") {
    const PropertyTable t = PropertyTable::load(kTable);
    for (const SatProps& row : t.rows()) {
        const SatProps s = t.saturation(row.p_kpa);
        CHECK(s.h_f == row.h_f);
        CHECK(s.h_fg == row.h_fg);
        CHECK(s.rho_f == row.rho_f);
        CHECK(s.rho_g == row.rho_g);
        CHECK(s.t_sat == row.t_sat);
    }
}

TEST_CASE("interpolation is linear between knots") {
    const PropertyTable t = PropertyTable::load(kTable);
    const auto& rows = t.rows();
    for (size_t i = 0; i + 1 < rows.size(); i += 7) {
        const double mid = 0.5 * (rows[i].p_kpa + rows[i + 1].p_kpa);
        const SatProps s = t.saturation(mid);
        CHECK(s.h_f ==
              doctest::Approx(0.5 * (rows[i].h_f + rows[i + 1].h_f))
                  .epsilon(1e-12));
        CHECK(s.h_fg ==
              doctest::Approx(0.5 * (rows[i].h_fg + rows[i + 1].h_fg))
                  .epsilon(1e-12));
    }
}

TEST_CASE("reference values and atmospheric sanity") {
    const PropertyTable t = PropertyTable::load(kTable);

    // Frozen from the independent property evaluation used to pin the
    // correlation reference points.
    CHECK(t.saturation(6890.0).h_fg == doctest::Approx(1512.28816).epsilon(1e-7));

    const SatProps atm = t.saturation(100.0);
    CHECK(atm.t_sat == doctest::Approx(372.76).epsilon(2e-4));
    CHECK(atm.h_fg == doctest::Approx(2257.5).epsilon(1e-3));
    CHECK(atm.rho_f == doctest::Approx(958.6).epsilon(1e-3));
}

TEST_CASE("out-of-range pressures raise a range error naming the bounds") {
    const PropertyTable t = PropertyTable::load(kTable);
    CHECK_THROWS_AS((void)t.saturation(50.0), RangeError);
    CHECK_THROWS_AS((void)t.saturation(25000.0), RangeError);
    try {
        (void)t.saturation(50.0);
    } catch (const RangeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("100") != std::string::npos);
        CHECK(msg.find("21000") != std::string::npos);
    }
}

TEST_CASE("equilibrium quality follows its definition") {
    const PropertyTable t = PropertyTable::load(kTable);
    const SatProps s = t.saturation(7000.0);
    CHECK(equilibrium_quality(s.h_f, s) == 0.0);
    CHECK(equilibrium_quality(s.h_f + s.h_fg, s) == doctest::Approx(1.0));
    CHECK(equilibrium_quality(s.h_f - 100.0, s) < 0.0);
    CHECK(equilibrium_quality(s.h_f + 0.25 * s.h_fg, s) ==
          doctest::Approx(0.25));

    SatProps degenerate = s;
    degenerate.h_fg = 0.0;
    CHECK_THROWS_AS((void)equilibrium_quality(s.h_f, degenerate), ModelError);
}

TEST_CASE("loader rejects malformed tables") {
    SUBCASE("bad header") {
        const auto p = write_temp("props_bad_header.csv",
                                  "pressure,hf\n100,1\n200,2\n");
        CHECK_THROWS_AS((void)PropertyTable::load(p), InputError);
    }
    SUBCASE("malformed value carries the line number") {
        const auto p = write_temp(
            "props_bad_value.csv",
            "P_kPa,hf_kJkg,hfg_kJkg,rhof_kgm3,rhog_kgm3,Tsat_K\n"
            "100,417,2257,958,0.59,372\n"
            "200,bogus,2201,942,1.13,393\n");
        try {
            (void)PropertyTable::load(p);
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find(":3") != std::string::npos);
        }
    }
    SUBCASE("non-monotone pressure") {
        const auto p = write_temp(
            "props_nonmono.csv",
            "P_kPa,hf_kJkg,hfg_kJkg,rhof_kgm3,rhog_kgm3,Tsat_K\n"
            "200,504,2201,942,1.13,393\n"
            "100,417,2257,958,0.59,372\n");
        CHECK_THROWS_AS((void)PropertyTable::load(p), InputError);
    }
    SUBCASE("fewer than two rows") {
        const auto p = write_temp(
            "props_short.csv",
            "P_kPa,hf_kJkg,hfg_kJkg,rhof_kgm3,rhog_kgm3,Tsat_K\n"
            "100,417,2257,958,0.59,372\n");
        CHECK_THROWS_AS((void)PropertyTable::load(p), InputError);
    }
    SUBCASE("non-physical row") {
        const auto p = write_temp(
            "props_nonphys.csv",
            "P_kPa,hf_kJkg,hfg_kJkg,rhof_kgm3,rhog_kgm3,Tsat_K\n"
            "100,417,2257,958,0.59,372\n"
            "200,504,-5,942,1.13,393\n");
        CHECK_THROWS_AS((void)PropertyTable::load(p), InputError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)PropertyTable::load("/tmp/does_not_exist.csv"),
                        InputError);
    }
}
