#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "andwc/harness/runner.hpp"

namespace andwc::harness {

// Human-readable digest of one run.
std::string text_summary(const RunOutcome& outcome);

// One CSV with a fixed wide header; each row is one record, discriminated by
// the first column (handoff, scan, air_verification, traffic, air_frames,
// lan_packets, comparison). Times render on the exact microsecond grid, so
// identical runs serialize identically.
void write_csv(std::ostream& os, const std::vector<RunOutcome>& runs);

// Cached-list scheme vs classic full scan over the same scenario and seed.
struct Comparison {
    std::optional<SimTime> cached_latency;    // first completed handoff
    std::optional<SimTime> baseline_latency;
    std::int64_t cached_lost = 0;
    std::int64_t baseline_lost = 0;
    std::int64_t cached_probes = 0;    // probe requests in that handoff
    std::int64_t baseline_probes = 0;
    std::vector<ExpectCheck> checks;   // built-in sanity assertions
};

Comparison compare_outcomes(const RunOutcome& cached, const RunOutcome& baseline);

std::string comparison_text(const Comparison& cmp);

// Rows only; meant to follow write_csv output in the same stream.
void write_comparison_rows(std::ostream& os, const Comparison& cmp,
                           const std::string& scenario, std::uint64_t seed);

}  // namespace andwc::harness
