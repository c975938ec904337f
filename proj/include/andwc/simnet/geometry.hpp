#pragma once

#include <cmath>

#include "andwc/simnet/time.hpp"

namespace andwc::simnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Straight-line constant-velocity motion; parked at the origin until start.
class LinearMobility {
public:
    LinearMobility() = default;
    LinearMobility(Vec2 origin, Vec2 velocity_mps, SimTime start = {})
        : origin_(origin), velocity_(velocity_mps), start_(start) {}

    Vec2 at(SimTime t) const {
        if (t <= start_) return origin_;
        double dt_s = static_cast<double>((t - start_).us) / 1e6;
        return {origin_.x + velocity_.x * dt_s, origin_.y + velocity_.y * dt_s};
    }

private:
    Vec2 origin_;
    Vec2 velocity_;
    SimTime start_;
};

}  // namespace andwc::simnet
