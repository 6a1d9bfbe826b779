#pragma once

#include <vector>

#include "gridflow/numerics.hpp"

namespace gridflow {

// One smart meter of the distributed state estimation layer. Every
// meter keeps a full copy Z of all meters' measurements, filled in by
// neighbor-to-neighbor propagation; its own entry always carries the
// latest local measurement.
class DseMeter {
public:
    DseMeter(int own_index, Eigen::Index n_meters, double tau);

    // One propagation round. neighbor_z holds the neighbors'
    // prior-round primed vectors (own entry refreshed), weighted by
    // `weights` in the same order. The own entry is masked from the
    // consensus term and set to local_z.
    void dse_step(const std::vector<Vector>& neighbor_z,
                  const std::vector<double>& weights, double local_z);

    // Z with the own entry replaced by the given local measurement;
    // this is what gets broadcast to neighbors.
    Vector primed(double local_z) const;

    const Vector& z() const { return z_; }
    int own_index() const { return own_index_; }

private:
    int own_index_;
    double tau_;
    Vector z_;
};

// Weighted least squares theta = (H^T R^-1 H)^-1 H^T R^-1 z, with the
// normal-matrix factorization done once at construction.
class WlsEstimator {
public:
    WlsEstimator(const Matrix& h_obs, const Vector& r_diag);

    Vector estimate(const Vector& z) const;

private:
    Matrix solve_op_;  // (H^T R^-1 H)^-1 H^T R^-1
};

// P_f = Hflow * theta.
Vector flows_from_states(const Vector& theta, const Matrix& h_flow);

}  // namespace gridflow
