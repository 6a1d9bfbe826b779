#pragma once

#include <random>
#include <vector>

#include "gridflow/grid_matrices.hpp"
#include "gridflow/network.hpp"
#include "gridflow/numerics.hpp"

namespace gridflow {

struct PlantParams {
    double f0 = 60.0;       // Hz
    double inertia = 10.0;  // M, p.u.*s/Hz
    double damping = 1.0;   // D, p.u./Hz
    double tau = 0.01;      // s
    double load_sigma = 0.0;  // Gaussian load perturbation, p.u.
};

// Ground-truth physics: lossless DC flow, aggregate frequency
// dynamics, first-order generator response, scheduled loads. All
// powers p.u. on the case base.
class Plant {
public:
    Plant(const NetworkCase& nc, const GridMatrices& gm, PlantParams params,
          std::uint64_t seed);

    // Angles and line flows for a (possibly unbalanced) injection
    // vector. The imbalance is carried by the frequency dynamics, not
    // the network, so flows come from the balanced component with the
    // mismatch taken off the generator buses uniformly.
    std::pair<Vector, Vector> solve_dc_flow(const Vector& injections) const;

    static double step_frequency(double f, double total_gen, double total_load,
                                 const PlantParams& p);

    // Advances generator outputs one step towards the references
    // (p.u.) through each unit's first-order lag, clamped to limits.
    void step_generators(const Vector& references_pu);

    // Samples the load schedules at the current time (plus seeded
    // noise) into the per-slot draw vector.
    void step_loads();

    // Full plant step: loads, generators, flows, frequency, time.
    void advance(const Vector& references_pu);

    // Recomputes angles and flows from the current injections, without
    // advancing time. Used after seeding initial generator outputs.
    void refresh();

    Vector injections() const;  // per-bus net injection, p.u.

    const Vector& gen_outputs() const { return gen_pu_; }
    void set_gen_outputs(const Vector& g) { gen_pu_ = g; }
    const Vector& load_draws() const { return load_pu_; }  // per load slot
    const Vector& line_flows() const { return pf_; }
    const Vector& angles() const { return theta_; }
    double frequency() const { return f_; }
    double time() const { return t_; }

private:
    const NetworkCase& nc_;
    const GridMatrices& gm_;
    PlantParams params_;
    std::mt19937_64 rng_;

    // load slot -> indices into nc.loads drawing on it
    std::vector<std::vector<std::size_t>> slot_loads_;

    Vector gen_pu_;
    Vector load_pu_;
    Vector pf_;
    Vector theta_;
    double f_;
    double t_ = 0.0;
};

}  // namespace gridflow
