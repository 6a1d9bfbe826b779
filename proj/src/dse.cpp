#include "gridflow/dse.hpp"

#include <cassert>
#include <stdexcept>

namespace gridflow {

DseMeter::DseMeter(int own_index, Eigen::Index n_meters, double tau)
    : own_index_(own_index), tau_(tau), z_(Vector::Zero(n_meters)) {}

Vector DseMeter::primed(double local_z) const {
    Vector zp = z_;
    zp(own_index_) = local_z;
    return zp;
}

void DseMeter::dse_step(const std::vector<Vector>& neighbor_z,
                        const std::vector<double>& weights, double local_z) {
    assert(neighbor_z.size() == weights.size());
    Vector zp = primed(local_z);
    Vector next = zp;
    for (std::size_t j = 0; j < neighbor_z.size(); ++j) {
        next += tau_ * weights[j] * (neighbor_z[j] - zp);
    }
    next(own_index_) = local_z;  // own entry masked from the consensus term
    z_ = next;
}

WlsEstimator::WlsEstimator(const Matrix& h_obs, const Vector& r_diag) {
    Vector w = r_diag.cwiseInverse();
    Matrix normal = h_obs.transpose() * w.asDiagonal() * h_obs;
    Eigen::FullPivLU<Matrix> lu(normal);
    if (!lu.isInvertible()) {
        throw std::runtime_error(
            "WLS normal matrix is singular: system unobservable");
    }
    solve_op_ = lu.solve(Matrix(h_obs.transpose() * w.asDiagonal()));
}

Vector WlsEstimator::estimate(const Vector& z) const {
    return solve_op_ * z;
}

Vector flows_from_states(const Vector& theta, const Matrix& h_flow) {
    return h_flow * theta;
}

}  // namespace gridflow
