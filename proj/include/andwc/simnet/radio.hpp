#pragma once

#include <algorithm>
#include <cmath>

namespace andwc::simnet {

// Log-distance path loss. Signal strength falls strictly with distance, so a
// station walking away from its AP crosses any threshold exactly once.
struct RadioModel {
    double tx_power_dbm = 20.0;
    double reference_loss_db = 40.0;   // loss at 1 m
    double path_loss_exponent = 3.0;
    double range_cutoff_dbm = -90.0;   // weaker than this never arrives

    double rss_dbm(double distance_m) const {
        double d = std::max(distance_m, 1.0);
        return tx_power_dbm - reference_loss_db -
               10.0 * path_loss_exponent * std::log10(d);
    }

    bool deliverable(double rss) const { return rss >= range_cutoff_dbm; }

    // Largest distance still inside the cutoff; handy for scenario design.
    double range_m() const {
        return std::pow(10.0, (tx_power_dbm - reference_loss_db - range_cutoff_dbm) /
                                  (10.0 * path_loss_exponent));
    }
};

}  // namespace andwc::simnet
