#include "pla/scenario.hpp"

#include <cmath>
#include <sstream>

namespace pla {

namespace {

bool near_integer(double v) {
    return std::abs(v - std::round(v)) < 1e-9;
}

}  // namespace

DerivedParams derive_params(const ScenarioParams& sp) {
    DerivedParams d;
    d.packets_per_publish = static_cast<int>(std::ceil(sp.m));
    d.msgs_per_retx_packet = static_cast<int>(std::ceil(1.0 / sp.m));
    return d;
}

ValidationReport validate_scenario(const ScenarioParams& sp) {
    ValidationReport rep;
    auto err = [&rep](const std::string& s) { rep.errors.push_back(s); };
    auto warn = [&rep](const std::string& s) { rep.warnings.push_back(s); };

    if (!(sp.m > 0.0) || !std::isfinite(sp.m)) err("m must be a positive real");
    if (!(sp.r_ms > 0.0) || !std::isfinite(sp.r_ms)) err("publish period r must be > 0");
    if (!(sp.h_ms > 0.0) || !std::isfinite(sp.h_ms)) err("heartbeat period h must be > 0");
    if (!(sp.p > 0.0) || sp.p > 1.0 || !std::isfinite(sp.p)) err("p out of range (0, 1]");
    if (sp.mtu_bytes <= 0) err("mtu_bytes must be positive");
    if (sp.hb_extra_ms < 0.0) err("hb_extra_ms must be non-negative");

    if (sp.m > 0.0 && !near_integer(sp.m) && !near_integer(1.0 / sp.m)) {
        std::ostringstream os;
        os << "m = " << sp.m << ": neither m nor 1/m is an integer; "
              "packet counts use ceilings";
        warn(os.str());
    }
    return rep;
}

}  // namespace pla
