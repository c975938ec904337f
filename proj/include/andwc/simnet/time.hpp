#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace andwc::simnet {

// Simulation time on a 1 microsecond grid. Integer throughout so that event
// ordering, reported latencies, and emitted text are exactly reproducible.
struct SimTime {
    std::int64_t us = 0;

    static constexpr SimTime from_us(std::int64_t v) { return SimTime{v}; }
    static SimTime from_ms(double ms) {
        return SimTime{static_cast<std::int64_t>(std::llround(ms * 1000.0))};
    }

    double ms() const { return static_cast<double>(us) / 1000.0; }

    // Exact decimal rendering, e.g. 2400us -> "2.400".
    std::string ms_string() const {
        std::int64_t v = us;
        bool neg = v < 0;
        if (neg) v = -v;
        std::string s = std::to_string(v / 1000) + '.';
        std::int64_t frac = v % 1000;
        s += static_cast<char>('0' + frac / 100);
        s += static_cast<char>('0' + frac / 10 % 10);
        s += static_cast<char>('0' + frac % 10);
        return neg ? "-" + s : s;
    }

    auto operator<=>(const SimTime&) const = default;

    SimTime operator+(SimTime o) const { return SimTime{us + o.us}; }
    SimTime operator-(SimTime o) const { return SimTime{us - o.us}; }
    SimTime& operator+=(SimTime o) { us += o.us; return *this; }
    SimTime operator*(std::int64_t k) const { return SimTime{us * k}; }
};

}  // namespace andwc::simnet
