#pragma once

#include <string>
#include <vector>

#include "gridflow/grid_matrices.hpp"
#include "gridflow/network.hpp"

namespace gridflow {
namespace oracle {

struct DispatchSolution {
    std::vector<double> outputs_mw;
    double lambda = 0.0;
    double cost_per_hour = 0.0;
    std::vector<std::string> binding;  // "gen <bus> at pmin/pmax", "line <u>"
    bool feasible = true;
};

// Equal-incremental-cost dispatch by bisection on lambda with clamped
// outputs. Throws std::invalid_argument for demand outside limits.
DispatchSolution centralized_ed(const std::vector<Generator>& gens,
                                double demand_mw);

// Exhaustive grid search over generator outputs (n_g <= 3) meeting the
// balance within one grid step, discarding points whose DC flows
// violate a line limit. `loads_mw` is the per-load-slot draw (aligned
// with gm.load_cols). feasible=false when nothing qualifies.
DispatchSolution centralized_dcopf_bruteforce(const NetworkCase& nc,
                                              const GridMatrices& gm,
                                              const std::vector<double>& loads_mw,
                                              double step_mw = 1.0);

}  // namespace oracle
}  // namespace gridflow
