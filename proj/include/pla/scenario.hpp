#pragma once

#include <string>
#include <vector>

namespace pla {

// One analyzable publish/subscribe configuration.
//
// m is the ratio of total message size to the UDP MTU. A publish emits
// ceil(m) packets; a retransmission packet carries up to ceil(1/m) messages.
struct ScenarioParams {
    double m = 1.0;            // message-to-MTU ratio
    double r_ms = 50.0;        // publish period
    double h_ms = 50.0;        // nominal heartbeat period
    double p = 1.0;            // per-packet delivery probability, (0, 1]
    int mtu_bytes = 1500;      // informational
    double hb_extra_ms = 0.2;  // observed heartbeat period inflation
};

struct DerivedParams {
    int packets_per_publish = 1;    // ceil(m)
    int msgs_per_retx_packet = 1;   // ceil(1/m)
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

DerivedParams derive_params(const ScenarioParams& sp);

// Structured diagnostics; never throws. p outside (0,1] and non-positive
// m/r/h are errors; m with neither m nor 1/m integral is a warning only.
ValidationReport validate_scenario(const ScenarioParams& sp);

}  // namespace pla
