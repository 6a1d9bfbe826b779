#pragma once

#include <string>

#include "gridflow/network.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
    return std::string(GRIDFLOW_DATA_DIR) + "/" + name;
}

// Smallest connected case: two buses, one line x=0.5, generator on
// bus 1, load on bus 2.
inline const char* kTwoBusJson = R"({
  "base_mva": 100.0,
  "buses": [1, 2],
  "lines": [{"from": 1, "to": 2, "x": 0.5, "limit": 2.0}],
  "generators": [{"bus": 1, "alpha": 10.0, "beta": 8.0, "gamma": 0.002,
                  "pmin": 0.0, "pmax": 300.0, "lag_s": 0.5}],
  "loads": [{"bus": 2, "schedule": [[0.0, 100.0]]}],
  "comm": {"controllers": [], "meters": [[1, 2]]}
})";

inline gridflow::NetworkCase two_bus() {
    return gridflow::load_case(kTwoBusJson);
}

}  // namespace fixtures
