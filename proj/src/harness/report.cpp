#include "andwc/harness/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace andwc::harness {

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

struct Row {
    std::string record, scenario, mode, seed, agent;
    std::string start_ms, end_ms, duration_ms;
    std::string count_a, count_b, flag, detail, value;
};

void emit(std::ostream& os, const Row& r) {
    os << csv_field(r.record) << ',' << csv_field(r.scenario) << ','
       << csv_field(r.mode) << ',' << r.seed << ',' << csv_field(r.agent) << ','
       << r.start_ms << ',' << r.end_ms << ',' << r.duration_ms << ',' << r.count_a
       << ',' << r.count_b << ',' << csv_field(r.flag) << ',' << csv_field(r.detail)
       << ',' << csv_field(r.value) << '\n';
}

Row base_row(const RunOutcome& run, const char* record) {
    Row r;
    r.record = record;
    r.scenario = run.scenario_name;
    r.mode = run.mode_label;
    r.seed = std::to_string(run.seed);
    return r;
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<RunOutcome>& runs) {
    os << "record,scenario,mode,seed,agent,start_ms,end_ms,duration_ms,"
          "count_a,count_b,flag,detail,value\n";
    for (const auto& run : runs) {
        for (const auto& h : run.stats.handoffs) {
            Row r = base_row(run, "handoff");
            r.agent = h.ms;
            r.start_ms = h.trigger.ms_string();
            if (h.complete) {
                r.end_ms = h.complete->ms_string();
                r.duration_ms = (*h.complete - h.trigger).ms_string();
            }
            r.count_a = std::to_string(h.candidates_tried);
            r.count_b = std::to_string(h.probes_sent);
            r.flag = h.via_full_scan ? "full_scan" : "cached";
            r.detail = h.target;
            emit(os, r);
        }
        for (const auto& s : run.stats.scans) {
            Row r = base_row(run, "scan");
            r.agent = s.ms;
            r.start_ms = s.start.ms_string();
            if (s.end) {
                r.end_ms = s.end->ms_string();
                r.duration_ms = s.total_dwell.ms_string();
            }
            r.count_a = std::to_string(s.channels);
            r.count_b = std::to_string(s.responders);
            emit(os, r);
        }
        for (const auto& v : run.stats.verifications) {
            Row r = base_row(run, "air_verification");
            r.agent = v.ap;
            r.start_ms = v.begin.ms_string();
            if (v.end) {
                r.end_ms = v.end->ms_string();
                r.duration_ms = (*v.end - v.begin).ms_string();
            }
            r.count_a = std::to_string(v.verified);
            r.count_b = std::to_string(v.silent);
            emit(os, r);
        }
        for (const auto& t : run.stats.traffic) {
            Row r = base_row(run, "traffic");
            r.agent = t.source;
            r.count_a = std::to_string(t.sent);
            r.count_b = std::to_string(t.lost);
            r.value = std::to_string(t.delivered);
            emit(os, r);
        }
        for (const auto& [name, count] : run.stats.air_frames) {
            Row r = base_row(run, "air_frames");
            r.count_a = std::to_string(count);
            r.detail = name;
            emit(os, r);
        }
        for (const auto& [name, count] : run.stats.lan_packets) {
            Row r = base_row(run, "lan_packets");
            r.count_a = std::to_string(count);
            r.detail = name;
            emit(os, r);
        }
    }
}

std::string text_summary(const RunOutcome& run) {
    std::ostringstream os;
    os << "scenario " << run.scenario_name << " (" << run.band << "), mode "
       << run.mode_label << ", seed " << run.seed << ", duration "
       << run.duration.ms_string() << " ms\n";

    os << "access points:\n";
    for (const auto& ap : run.aps) {
        os << "  " << ap.id << " " << ap.mac << ": " << ap.phase;
        if (!ap.neighbors.empty()) {
            os << ", neighbors";
            for (const auto& n : ap.neighbors) os << " " << n;
        }
        os << "\n";
    }
    if (!run.stations.empty()) {
        os << "stations:\n";
        for (const auto& ms : run.stations) {
            os << "  " << ms.id << ": " << ms.mode;
            if (ms.serving_mac) os << ", serving " << *ms.serving_mac;
            os << ", " << ms.handoffs_completed << " handoff"
               << (ms.handoffs_completed == 1 ? "" : "s") << " completed\n";
        }
    }
    if (!run.stats.handoffs.empty()) {
        os << "handoffs:\n";
        for (const auto& h : run.stats.handoffs) {
            os << "  " << h.ms << ": trigger " << h.trigger.ms_string() << " ms, ";
            if (h.complete) {
                os << "latency " << (*h.complete - h.trigger).ms_string() << " ms, "
                   << (h.via_full_scan ? "full scan" : "cached list") << ", joined "
                   << h.target;
            } else {
                os << "unfinished";
            }
            os << " (" << h.candidates_tried << " candidate"
               << (h.candidates_tried == 1 ? "" : "s") << ", " << h.probes_sent
               << " probe" << (h.probes_sent == 1 ? "" : "s") << ")\n";
        }
    }
    if (!run.stats.scans.empty()) {
        os << "scans:\n";
        for (const auto& s : run.stats.scans) {
            os << "  " << s.ms << ": start " << s.start.ms_string() << " ms, ";
            if (s.end) {
                os << "dwell " << s.total_dwell.ms_string() << " ms over "
                   << s.channels << " channels, " << s.responders << " responder"
                   << (s.responders == 1 ? "" : "s");
            } else {
                os << "unfinished";
            }
            os << "\n";
        }
    }
    if (!run.stats.verifications.empty()) {
        os << "verification passes:\n";
        for (const auto& v : run.stats.verifications) {
            os << "  " << v.ap << ": begin " << v.begin.ms_string() << " ms, ";
            if (v.end) {
                os << "took " << (*v.end - v.begin).ms_string() << " ms, ";
            }
            os << v.verified << " verified, " << v.silent << " silent\n";
        }
    }
    if (!run.stats.traffic.empty()) {
        os << "traffic:\n";
        for (const auto& t : run.stats.traffic) {
            os << "  " << t.source << ": " << t.sent << " sent, " << t.delivered
               << " delivered, " << t.lost << " lost\n";
        }
    }
    if (!run.stats.air_frames.empty()) {
        os << "air frames:";
        for (const auto& [name, count] : run.stats.air_frames)
            os << " " << name << " " << count;
        os << "\n";
    }
    if (!run.stats.lan_packets.empty()) {
        os << "lan packets:";
        for (const auto& [name, count] : run.stats.lan_packets)
            os << " " << name << " " << count;
        os << "\n";
    }
    return os.str();
}

Comparison compare_outcomes(const RunOutcome& cached, const RunOutcome& baseline) {
    Comparison cmp;
    auto first_handoff = [](const RunOutcome& run)
        -> const simnet::RunStats::Handoff* {
        for (const auto& h : run.stats.handoffs)
            if (h.complete) return &h;
        return nullptr;
    };
    const auto* ch = first_handoff(cached);
    const auto* bh = first_handoff(baseline);
    if (ch) {
        cmp.cached_latency = *ch->complete - ch->trigger;
        cmp.cached_probes = ch->probes_sent;
    }
    if (bh) {
        cmp.baseline_latency = *bh->complete - bh->trigger;
        cmp.baseline_probes = bh->probes_sent;
    }
    for (const auto& t : cached.stats.traffic) cmp.cached_lost += t.lost;
    for (const auto& t : baseline.stats.traffic) cmp.baseline_lost += t.lost;

    auto add = [&](bool ok, std::string text) {
        cmp.checks.push_back({ok, std::move(text)});
    };
    add(ch != nullptr, "cached run completed a handoff");
    add(bh != nullptr, "baseline run completed a handoff");
    if (ch && bh) {
        add(*cmp.cached_latency < *cmp.baseline_latency,
            "cached handoff (" + cmp.cached_latency->ms_string() +
                " ms) faster than baseline (" + cmp.baseline_latency->ms_string() +
                " ms)");
        add(cmp.cached_probes == 0,
            "cached handoff sent no probes (" + std::to_string(cmp.cached_probes) +
                ")");
        add(cmp.baseline_probes == baseline.scan_channels,
            "baseline probed every channel (" + std::to_string(cmp.baseline_probes) +
                " of " + std::to_string(baseline.scan_channels) + ")");
    }
    if (!cached.stats.traffic.empty() || !baseline.stats.traffic.empty()) {
        add(cmp.cached_lost <= cmp.baseline_lost,
            "cached run lost no more packets (" + std::to_string(cmp.cached_lost) +
                " vs " + std::to_string(cmp.baseline_lost) + ")");
    }
    return cmp;
}

std::string comparison_text(const Comparison& cmp) {
    std::ostringstream os;
    os << "                         cached       baseline\n";
    os << "first handoff latency    ";
    os << (cmp.cached_latency ? cmp.cached_latency->ms_string() + " ms" : "none");
    os << "     ";
    os << (cmp.baseline_latency ? cmp.baseline_latency->ms_string() + " ms" : "none");
    os << "\n";
    os << "probe requests           " << cmp.cached_probes << "            "
       << cmp.baseline_probes << "\n";
    os << "packets lost             " << cmp.cached_lost << "            "
       << cmp.baseline_lost << "\n";
    if (cmp.cached_latency && cmp.baseline_latency && cmp.cached_latency->us > 0) {
        os << "latency ratio            "
           << fixed2(static_cast<double>(cmp.baseline_latency->us) /
                     static_cast<double>(cmp.cached_latency->us))
           << "x\n";
    }
    if (cmp.cached_lost > 0) {
        os << "loss ratio               "
           << fixed2(static_cast<double>(cmp.baseline_lost) /
                     static_cast<double>(cmp.cached_lost))
           << "x\n";
    }
    for (const auto& check : cmp.checks)
        os << (check.ok ? "[ok]   " : "[FAIL] ") << check.text << "\n";
    return os.str();
}

void write_comparison_rows(std::ostream& os, const Comparison& cmp,
                           const std::string& scenario, std::uint64_t seed) {
    auto row = [&](const std::string& mode, const std::string& detail,
                   const std::string& duration, const std::string& count_a,
                   const std::string& value) {
        Row r;
        r.record = "comparison";
        r.scenario = scenario;
        r.mode = mode;
        r.seed = std::to_string(seed);
        r.duration_ms = duration;
        r.count_a = count_a;
        r.detail = detail;
        r.value = value;
        emit(os, r);
    };
    row("andwc", "first_handoff_latency_ms",
        cmp.cached_latency ? cmp.cached_latency->ms_string() : "", "", "");
    row("baseline", "first_handoff_latency_ms",
        cmp.baseline_latency ? cmp.baseline_latency->ms_string() : "", "", "");
    row("andwc", "handoff_probes", "", std::to_string(cmp.cached_probes), "");
    row("baseline", "handoff_probes", "", std::to_string(cmp.baseline_probes), "");
    row("andwc", "packets_lost", "", std::to_string(cmp.cached_lost), "");
    row("baseline", "packets_lost", "", std::to_string(cmp.baseline_lost), "");
    if (cmp.cached_latency && cmp.baseline_latency && cmp.cached_latency->us > 0)
        row("", "latency_ratio", "", "",
            fixed2(static_cast<double>(cmp.baseline_latency->us) /
                   static_cast<double>(cmp.cached_latency->us)));
    if (cmp.cached_lost > 0)
        row("", "loss_ratio", "", "",
            fixed2(static_cast<double>(cmp.baseline_lost) /
                   static_cast<double>(cmp.cached_lost)));
}

}  // namespace andwc::harness
