#include "gridflow/plant.hpp"

#include <algorithm>

namespace gridflow {

Plant::Plant(const NetworkCase& nc, const GridMatrices& gm, PlantParams params,
             std::uint64_t seed)
    : nc_(nc),
      gm_(gm),
      params_(params),
      rng_(seed),
      gen_pu_(Vector::Zero(static_cast<Eigen::Index>(nc.n_gens()))),
      load_pu_(Vector::Zero(static_cast<Eigen::Index>(gm.load_cols.size()))),
      pf_(Vector::Zero(static_cast<Eigen::Index>(nc.n_lines()))),
      theta_(Vector::Zero(static_cast<Eigen::Index>(nc.n_buses()) - 1)),
      f_(params.f0) {
    slot_loads_.resize(gm_.load_cols.size());
    for (std::size_t li = 0; li < nc_.loads.size(); ++li) {
        const int bi = nc_.bus_index(nc_.loads[li].bus);
        for (std::size_t s = 0; s < gm_.load_cols.size(); ++s) {
            if (gm_.load_cols[s] == bi) {
                slot_loads_[s].push_back(li);
                break;
            }
        }
    }
    step_loads();
    auto [theta, pf] = solve_dc_flow(injections());
    theta_ = theta;
    pf_ = pf;
}

std::pair<Vector, Vector> Plant::solve_dc_flow(const Vector& injections) const {
    Vector p = injections;
    const double imbalance = p.sum();
    const double share = imbalance / static_cast<double>(gm_.gen_cols.size());
    for (int c : gm_.gen_cols) p(c) -= share;
    Vector theta = gm_.T * p;
    return {theta, gm_.Hflow * theta};
}

double Plant::step_frequency(double f, double total_gen, double total_load,
                             const PlantParams& p) {
    return f + (p.tau / p.inertia) *
                   (total_gen - total_load - p.damping * (f - p.f0));
}

void Plant::step_generators(const Vector& references_pu) {
    for (Eigen::Index i = 0; i < gen_pu_.size(); ++i) {
        const Generator& g = nc_.generators[static_cast<std::size_t>(i)];
        const double ratio = std::min(1.0, params_.tau / g.lag_s);
        double next = gen_pu_(i) + ratio * (references_pu(i) - gen_pu_(i));
        gen_pu_(i) = std::clamp(next, g.pmin / nc_.base_mva, g.pmax / nc_.base_mva);
    }
}

void Plant::step_loads() {
    std::normal_distribution<double> noise(0.0, params_.load_sigma);
    for (std::size_t s = 0; s < slot_loads_.size(); ++s) {
        double draw = 0.0;
        for (std::size_t li : slot_loads_[s]) {
            draw += nc_.loads[li].mw_at(t_) / nc_.base_mva;
        }
        if (params_.load_sigma > 0 && !slot_loads_[s].empty()) {
            draw += noise(rng_);
        }
        load_pu_(static_cast<Eigen::Index>(s)) = draw;
    }
}

Vector Plant::injections() const {
    Vector p = Vector::Zero(static_cast<Eigen::Index>(nc_.n_buses()));
    for (std::size_t c = 0; c < gm_.gen_cols.size(); ++c) {
        p(gm_.gen_cols[c]) += gen_pu_(static_cast<Eigen::Index>(c));
    }
    for (std::size_t s = 0; s < gm_.load_cols.size(); ++s) {
        p(gm_.load_cols[s]) -= load_pu_(static_cast<Eigen::Index>(s));
    }
    return p;
}

void Plant::refresh() {
    auto [theta, pf] = solve_dc_flow(injections());
    theta_ = theta;
    pf_ = pf;
}

void Plant::advance(const Vector& references_pu) {
    t_ += params_.tau;
    step_generators(references_pu);
    step_loads();
    f_ = step_frequency(f_, gen_pu_.sum(), load_pu_.sum(), params_);
    auto [theta, pf] = solve_dc_flow(injections());
    theta_ = theta;
    pf_ = pf;
}

}  // namespace gridflow
