#pragma once

#include "andwc/simnet/time.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::agents {

using simnet::SimTime;

// Protocol timing knobs shared by both agent kinds. Defaults follow the
// reference timings; scenarios may override any of them.
struct ProtocolTiming {
    // AP side
    SimTime collection_window = SimTime::from_ms(50);     // neighbor census window
    SimTime air_verify_timeout = SimTime::from_ms(2);     // per over-the-air probe
    SimTime auth_service_delay = SimTime::from_ms(1);     // request -> response
    SimTime assoc_service_delay = SimTime::from_ms(1);
    SimTime probe_service_delay = SimTime::from_ms(0.8);  // probe req -> probe res send

    // Station side
    SimTime auth_req_timeout = SimTime::from_ms(0.5);       // silent-candidate give-up
    SimTime auth_response_deadline = SimTime::from_ms(20);  // liveness guard once acked
    SimTime rescan_backoff = SimTime::from_ms(100);         // wait between empty scans
    double hysteresis_db = 5.0;                             // baseline selection bar

    // Link quality recorded for neighbors learned over the wire only; they
    // sort behind every air-measured neighbor until measured themselves.
    wire::Rss unmeasured_link_rss = wire::Rss{-180};  // -90.0 dBm
};

}  // namespace andwc::agents
