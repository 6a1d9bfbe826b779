#pragma once

#include <vector>

#include "gridflow/network.hpp"
#include "gridflow/numerics.hpp"

namespace gridflow {

// One generator controller of the distributed economic dispatch layer.
// Each controller keeps the full generator parameter table locally and
// runs a consensus update on its incremental-cost estimate, with a PI
// term on the frequency error enforcing power balance.
class DedController {
public:
    DedController(int own_index, std::vector<Generator> gen_table,
                  double tau, double kp, double ki, double f0,
                  double lambda0);

    // One consensus round. neighbor_lambdas are the neighbors'
    // prior-round values weighted by `weights` (same order). Returns
    // the applied increment d_lambda.
    double consensus_step(const std::vector<double>& neighbor_lambdas,
                          const std::vector<double>& weights,
                          double f_meas);

    // Clamped economic-dispatch reference for generator j at multiplier
    // `lambda`, in MW.
    static double reference_from_lambda(double lambda, const Generator& g);

    // Predicted reference change of every generator for increment
    // d_lambda, computed from the local parameter table. Entries for
    // generators whose current reference sits on a limit are zero.
    Vector predict_gen_updates(double d_lambda,
                               const std::vector<double>& references) const;

    double lambda() const { return lambda_; }
    void set_lambda(double l) { lambda_ = l; }
    double own_reference() const;
    const Generator& own_gen() const { return gens_[own_index_]; }
    int own_index() const { return own_index_; }
    const std::vector<Generator>& gen_table() const { return gens_; }
    double tau() const { return tau_; }

private:
    int own_index_;
    std::vector<Generator> gens_;
    double tau_;
    double kp_;
    double ki_;
    double f0_;
    double lambda_;
    double prev_freq_error_ = 0.0;
};

}  // namespace gridflow
