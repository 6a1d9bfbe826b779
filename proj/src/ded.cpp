#include "gridflow/ded.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace gridflow {

DedController::DedController(int own_index, std::vector<Generator> gen_table,
                             double tau, double kp, double ki, double f0,
                             double lambda0)
    : own_index_(own_index),
      gens_(std::move(gen_table)),
      tau_(tau),
      kp_(kp),
      ki_(ki),
      f0_(f0),
      lambda_(lambda0) {}

double DedController::consensus_step(const std::vector<double>& neighbor_lambdas,
                                     const std::vector<double>& weights,
                                     double f_meas) {
    assert(neighbor_lambdas.size() == weights.size());
    double agree = 0.0;
    for (std::size_t j = 0; j < neighbor_lambdas.size(); ++j) {
        agree += weights[j] * (neighbor_lambdas[j] - lambda_);
    }
    const double freq_error = f0_ - f_meas;
    const double d2f = freq_error - prev_freq_error_;
    const double gamma = gens_[own_index_].gamma;
    const double d_lambda =
        tau_ * agree + 2.0 * gamma * (kp_ * d2f + tau_ * ki_ * freq_error);
    lambda_ += d_lambda;
    prev_freq_error_ = freq_error;
    return d_lambda;
}

double DedController::reference_from_lambda(double lambda, const Generator& g) {
    return std::clamp((lambda - g.beta) / (2.0 * g.gamma), g.pmin, g.pmax);
}

Vector DedController::predict_gen_updates(
    double d_lambda, const std::vector<double>& references) const {
    Vector dp = Vector::Zero(static_cast<Eigen::Index>(gens_.size()));
    for (std::size_t j = 0; j < gens_.size(); ++j) {
        const Generator& g = gens_[j];
        if (references[j] > g.pmin && references[j] < g.pmax) {
            dp(static_cast<Eigen::Index>(j)) = d_lambda / (2.0 * g.gamma);
        }
    }
    return dp;
}

double DedController::own_reference() const {
    return reference_from_lambda(lambda_, gens_[own_index_]);
}

}  // namespace gridflow
