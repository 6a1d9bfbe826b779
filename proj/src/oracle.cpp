#include "gridflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridflow {
namespace oracle {

namespace {

double total_output(const std::vector<Generator>& gens, double lambda) {
    double sum = 0.0;
    for (const Generator& g : gens) {
        sum += std::clamp((lambda - g.beta) / (2.0 * g.gamma), g.pmin, g.pmax);
    }
    return sum;
}

double cost_of(const std::vector<Generator>& gens,
               const std::vector<double>& p) {
    double c = 0.0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        c += gens[i].alpha + gens[i].beta * p[i] + gens[i].gamma * p[i] * p[i];
    }
    return c;
}

}  // namespace

DispatchSolution centralized_ed(const std::vector<Generator>& gens,
                                double demand_mw) {
    double pmin_sum = 0.0, pmax_sum = 0.0;
    for (const Generator& g : gens) {
        pmin_sum += g.pmin;
        pmax_sum += g.pmax;
    }
    if (demand_mw < pmin_sum - 1e-9 || demand_mw > pmax_sum + 1e-9) {
        throw std::invalid_argument("centralized_ed: demand outside generator limits");
    }

    double lo = gens[0].beta, hi = gens[0].beta;
    for (const Generator& g : gens) {
        lo = std::min(lo, g.beta + 2.0 * g.gamma * g.pmin);
        hi = std::max(hi, g.beta + 2.0 * g.gamma * g.pmax);
    }
    // bisection on the monotone lambda -> total output map
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lo + hi);
        const double total = total_output(gens, lambda);
        if (std::abs(total - demand_mw) < 1e-9) break;
        if (total < demand_mw) {
            lo = lambda;
        } else {
            hi = lambda;
        }
    }

    DispatchSolution sol;
    sol.lambda = lambda;
    for (const Generator& g : gens) {
        const double p = std::clamp((sol.lambda - g.beta) / (2.0 * g.gamma),
                                    g.pmin, g.pmax);
        sol.outputs_mw.push_back(p);
        if (p <= g.pmin + 1e-9) {
            sol.binding.push_back("gen " + std::to_string(g.bus) + " at pmin");
        } else if (p >= g.pmax - 1e-9) {
            sol.binding.push_back("gen " + std::to_string(g.bus) + " at pmax");
        }
    }
    sol.cost_per_hour = cost_of(gens, sol.outputs_mw);
    return sol;
}

DispatchSolution centralized_dcopf_bruteforce(const NetworkCase& nc,
                                              const GridMatrices& gm,
                                              const std::vector<double>& loads_mw,
                                              double step_mw) {
    const std::size_t ng = nc.generators.size();
    if (ng == 0 || ng > 3) {
        throw std::invalid_argument("brute-force oracle handles 1..3 generators");
    }
    if (step_mw <= 0) throw std::invalid_argument("grid step must be positive");

    double demand = 0.0;
    for (double l : loads_mw) demand += l;

    Vector load_pu(static_cast<Eigen::Index>(loads_mw.size()));
    for (std::size_t s = 0; s < loads_mw.size(); ++s) {
        load_pu(static_cast<Eigen::Index>(s)) = loads_mw[s] / nc.base_mva;
    }

    auto feasible_flows = [&](const std::vector<double>& p_mw) {
        Vector gen_pu(static_cast<Eigen::Index>(ng));
        for (std::size_t i = 0; i < ng; ++i) {
            gen_pu(static_cast<Eigen::Index>(i)) = p_mw[i] / nc.base_mva;
        }
        Vector pf = gm.Hflow * (gm.Tg * gen_pu - gm.TL * load_pu);
        for (Eigen::Index u = 0; u < pf.size(); ++u) {
            if (std::abs(pf(u)) > nc.lines[static_cast<std::size_t>(u)].limit + 1e-9) {
                return false;
            }
        }
        return true;
    };

    DispatchSolution best;
    best.feasible = false;
    best.cost_per_hour = std::numeric_limits<double>::infinity();

    auto consider = [&](const std::vector<double>& p) {
        const double c = cost_of(nc.generators, p);
        if (c < best.cost_per_hour && feasible_flows(p)) {
            best.cost_per_hour = c;
            best.outputs_mw = p;
            best.feasible = true;
        }
    };

    // Grid over the first n_g-1 generators; the last one closes the balance.
    const Generator& last = nc.generators[ng - 1];
    std::vector<double> p(ng, 0.0);
    if (ng == 1) {
        p[0] = demand;
        if (p[0] >= last.pmin - 1e-9 && p[0] <= last.pmax + 1e-9) consider(p);
    } else if (ng == 2) {
        const Generator& g0 = nc.generators[0];
        for (double p0 = g0.pmin; p0 <= g0.pmax + 1e-9; p0 += step_mw) {
            const double p1 = demand - p0;
            if (p1 < last.pmin - 1e-9 || p1 > last.pmax + 1e-9) continue;
            p[0] = p0;
            p[1] = p1;
            consider(p);
        }
    } else {
        const Generator& g0 = nc.generators[0];
        const Generator& g1 = nc.generators[1];
        for (double p0 = g0.pmin; p0 <= g0.pmax + 1e-9; p0 += step_mw) {
            for (double p1 = g1.pmin; p1 <= g1.pmax + 1e-9; p1 += step_mw) {
                const double p2 = demand - p0 - p1;
                if (p2 < last.pmin - 1e-9 || p2 > last.pmax + 1e-9) continue;
                p[0] = p0;
                p[1] = p1;
                p[2] = p2;
                consider(p);
            }
        }
    }

    if (best.feasible) {
        // report marginal cost of an interior generator, if any
        for (std::size_t i = 0; i < ng; ++i) {
            const Generator& g = nc.generators[i];
            const double pi = best.outputs_mw[i];
            if (pi > g.pmin + step_mw && pi < g.pmax - step_mw) {
                best.lambda = g.beta + 2.0 * g.gamma * pi;
                break;
            }
        }
        Vector gen_pu(static_cast<Eigen::Index>(ng));
        for (std::size_t i = 0; i < ng; ++i) {
            gen_pu(static_cast<Eigen::Index>(i)) = best.outputs_mw[i] / nc.base_mva;
        }
        Vector pf = gm.Hflow * (gm.Tg * gen_pu - gm.TL * load_pu);
        for (Eigen::Index u = 0; u < pf.size(); ++u) {
            if (std::abs(pf(u)) >
                nc.lines[static_cast<std::size_t>(u)].limit - 1e-6) {
                best.binding.push_back("line " + std::to_string(u + 1));
            }
        }
    }
    return best;
}

}  // namespace oracle
}  // namespace gridflow
