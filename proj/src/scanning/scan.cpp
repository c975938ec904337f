#include "andwc/scanning/scan.hpp"

#include <algorithm>
#include <stdexcept>

namespace andwc::scanning {

void ScanConfig::validate() const {
    if (channels.empty())
        throw std::invalid_argument("scan channel list is empty");
    for (auto ch : channels)
        if (ch < 1 || ch > 32)
            throw std::invalid_argument("scan channel out of range 1..32");
    if (min_channel_time.us <= 0 || max_channel_time.us <= 0)
        throw std::invalid_argument("channel times must be positive");
    if (max_channel_time < min_channel_time)
        throw std::invalid_argument("MaxChannelTime below MinChannelTime");
    if (beacon_interval.us <= 0)
        throw std::invalid_argument("beacon interval must be positive");
    if (channel_switch_time.us < 0)
        throw std::invalid_argument("channel switch time must not be negative");
}

SimTime passive_scan_delay(const ScanConfig& cfg) {
    cfg.validate();
    auto n = static_cast<std::int64_t>(cfg.channels.size());
    return cfg.beacon_interval * n + cfg.channel_switch_time * n;
}

SimTime active_channel_dwell(const ScanConfig& cfg, int responses_before_min) {
    return responses_before_min > 0 ? cfg.max_channel_time : cfg.min_channel_time;
}

ScanResult run_active_scan(const ScanConfig& cfg, const ScanEnvironment& env) {
    cfg.validate();
    ScanResult result;
    result.probes_sent = static_cast<int>(cfg.channels.size());
    result.total_delay = cfg.channel_switch_time * static_cast<std::int64_t>(cfg.channels.size());

    for (auto channel : cfg.channels) {
        std::vector<ScanResponder> responders;
        if (auto it = env.by_channel.find(channel); it != env.by_channel.end())
            responders = it->second;
        std::stable_sort(responders.begin(), responders.end(),
                         [](const ScanResponder& a, const ScanResponder& b) {
                             if (a.latency != b.latency) return a.latency < b.latency;
                             return a.ap.mac < b.ap.mac;
                         });

        int before_min = 0;
        for (const auto& r : responders)
            if (r.latency < cfg.min_channel_time) ++before_min;

        SimTime dwell = active_channel_dwell(cfg, before_min);
        result.dwell.push_back(dwell);
        result.total_delay += dwell;

        for (const auto& r : responders)
            if (r.latency < dwell)
                result.hits.push_back({r.ap, r.rss, channel});
    }
    return result;
}

std::optional<ScanHit> select_best(const std::vector<ScanHit>& hits,
                                   std::optional<wire::Rss> current_rss,
                                   double hysteresis_db) {
    auto bar_half_db = static_cast<std::int32_t>(std::llround(hysteresis_db * 2.0));
    const ScanHit* best = nullptr;
    for (const auto& hit : hits) {
        if (current_rss &&
            hit.rss.half_db - current_rss->half_db <= bar_half_db)
            continue;  // not convincingly better than what we have
        if (!best || hit.rss.half_db > best->rss.half_db ||
            (hit.rss.half_db == best->rss.half_db && hit.ap.mac < best->ap.mac))
            best = &hit;
    }
    if (!best) return std::nullopt;
    return *best;
}

}  // namespace andwc::scanning
