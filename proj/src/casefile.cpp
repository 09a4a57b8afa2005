#include <fstream>
#include <sstream>
#include <string>

#include "chf/errors.hpp"
#include "chf/subchannel.hpp"

namespace chf {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, size_t lineno,
                       const std::string& what) {
    throw InputError(path + ":" + std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& path, size_t lineno,
                    const std::string& token) {
    try {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) fail(path, lineno, "bad number '" + token + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(path, lineno, "bad number '" + token + "'");
    }
}

} // namespace

BundleCase BundleCase::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open case file: " + path);

    BundleCase bc;
    std::string section;
    std::string line;
    size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(path, lineno, "malformed section header " + line);
            section = line.substr(1, line.size() - 2);
            if (section != "case" && section != "inlet" &&
                section != "spacers" && section != "channels" &&
                section != "gaps" && section != "rods" &&
                section != "rod_surfaces")
                fail(path, lineno, "unknown section [" + section + "]");
            continue;
        }
        if (section.empty())
            fail(path, lineno, "content before any [section]");

        std::istringstream ss(line);
        if (section == "case" || section == "inlet") {
            std::string key, value;
            if (!(ss >> key >> value))
                fail(path, lineno, "expected 'key value'");
            std::string extra;
            if (ss >> extra) fail(path, lineno, "trailing content '" + extra + "'");

            if (section == "case") {
                if (key == "name") bc.name = value;
                else if (key == "heated_length")
                    bc.heated_length_m = parse_double(path, lineno, value);
                else if (key == "n_axial")
                    bc.n_axial = static_cast<int>(
                        parse_double(path, lineno, value));
                else if (key == "l_obs")
                    bc.l_obs_m = parse_double(path, lineno, value);
                else if (key == "power")
                    bc.power_kw = parse_double(path, lineno, value);
                else if (key == "beta")
                    bc.beta_sp = parse_double(path, lineno, value);
                else if (key == "friction")
                    bc.friction = parse_double(path, lineno, value);
                else if (key == "exp_chf")
                    bc.exp_chf_kwm2 = parse_double(path, lineno, value);
                else if (key == "synthetic") {
                    if (value != "true" && value != "false")
                        fail(path, lineno, "synthetic must be true or false");
                    bc.synthetic = value == "true";
                } else
                    fail(path, lineno, "unknown [case] key '" + key + "'");
            } else {
                if (key == "pressure")
                    bc.p_in_kpa = parse_double(path, lineno, value);
                else if (key == "mass_flux")
                    bc.g_in_kgm2s = parse_double(path, lineno, value);
                else if (key == "enthalpy")
                    bc.h_in_kjkg = parse_double(path, lineno, value);
                else
                    fail(path, lineno, "unknown [inlet] key '" + key + "'");
            }
            continue;
        }

        if (section == "spacers") {
            Spacer s;
            if (!(ss >> s.elevation_m >> s.k_loss))
                fail(path, lineno, "spacer row needs 'elevation k_loss'");
            bc.spacers.push_back(s);
        } else if (section == "channels") {
            size_t id;
            ChannelGeometry g;
            if (!(ss >> id >> g.area_m2 >> g.heated_perim_m >> g.wetted_perim_m))
                fail(path, lineno,
                     "channel row needs 'id area heated_perim wetted_perim'");
            if (id != bc.channels.size())
                fail(path, lineno, "channel ids must be sequential from 0");
            bc.channels.push_back(g);
        } else if (section == "gaps") {
            Gap g;
            if (!(ss >> g.i >> g.j >> g.width_m))
                fail(path, lineno, "gap row needs 'i j width'");
            bc.gaps.push_back(g);
        } else if (section == "rods") {
            size_t id;
            Rod r;
            if (!(ss >> id >> r.peaking))
                fail(path, lineno, "rod row needs 'id peaking'");
            if (id != bc.rods.size())
                fail(path, lineno, "rod ids must be sequential from 0");
            bc.rods.push_back(r);
        } else {   // rod_surfaces
            RodSurface s;
            if (!(ss >> s.rod >> s.channel >> s.fraction))
                fail(path, lineno,
                     "rod surface row needs 'rod channel fraction'");
            bc.rod_surfaces.push_back(s);
        }
        std::string extra;
        if (ss >> extra) fail(path, lineno, "trailing content '" + extra + "'");
    }

    bc.validate();
    return bc;
}

} // namespace chf
