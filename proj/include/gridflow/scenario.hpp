#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gridflow/network.hpp"
#include "gridflow/plant.hpp"

namespace gridflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a run needs: the network case plus all gains, rates,
// noise levels, and feature switches.
struct Scenario {
    NetworkCase network;

    double tau = 0.01;        // s, shared control/DSE/plant step
    double duration_s = 10.0;
    std::uint64_t seed = 1;

    double f0 = 60.0;
    double inertia = 10.0;    // M
    double damping = 1.0;     // D

    double kp = 40.0;         // DED frequency PI
    double ki = 10.0;
    double kfp = 2.0;         // penalty PI
    double kfi = 0.5;

    double rho = 1.0;         // overflow activation threshold factor
    double meter_sigma = 0.0;
    double load_sigma = 0.0;

    std::size_t ar_window = 50;
    std::size_t ar_refit = 10;

    double lambda0 = 9.0;     // initial multiplier, all controllers

    bool constraint_enabled = true;
    bool penalty_enabled = true;

    double drop_prob = 0.0;
    int delay_steps = 0;

    // generator bus -> meter bus; missing entries default to the
    // generator's own bus.
    std::map<int, int> attachments;

    // 1-based line index -> limit override (p.u.), applied on top of
    // the case file so limit variants of one network stay diffable.
    std::map<int, double> line_limits;

    PlantParams plant_params() const;
};

// Parses a scenario JSON document. The case is either inline under
// "case" or referenced by "case_path" (resolved against base_dir).
Scenario load_scenario(const std::string& json_text,
                       const std::string& base_dir = ".");
Scenario load_scenario_file(const std::string& path);

}  // namespace gridflow
