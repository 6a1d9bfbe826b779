#pragma once

#include <deque>
#include <span>
#include <vector>

#include "gridflow/numerics.hpp"

namespace gridflow {

struct Ar2Coeffs {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

// Least-squares fit of delta(t) = phi1*delta(t-1) + phi2*delta(t-2)
// over the sample window. Returns the minimum-norm solution when the
// normal system is rank deficient; all-zero history gives (0, 0).
Ar2Coeffs fit_ar2(std::span<const double> samples);

double predict_load_delta(const Ar2Coeffs& c, double d1, double d2);

// AR(2) load-variation model for one load slot: ring buffer of recent
// deltas plus periodically refitted coefficients. Below 3 samples the
// prediction falls back to persistence (last delta).
class LoadDeltaModel {
public:
    explicit LoadDeltaModel(std::size_t window = 50, std::size_t refit_every = 10);

    void push(double delta);
    double predict() const;
    const Ar2Coeffs& coeffs() const { return coeffs_; }
    std::size_t size() const { return history_.size(); }

private:
    std::size_t window_;
    std::size_t refit_every_;
    std::size_t pushes_since_fit_ = 0;
    bool fitted_ = false;
    std::deque<double> history_;
    Ar2Coeffs coeffs_;
};

struct OverflowFlags {
    std::vector<int> of;    // 0/1 per line
    std::vector<int> sign;  // violation direction, meaningful where of=1

    bool any() const;
};

// Next-step line flows from the previous flows plus predicted
// generation and load injection changes (all p.u.).
Vector predict_line_flows(const Vector& pf_prev, const Vector& dpg,
                          const Vector& dpl, const Matrix& h_flow,
                          const Matrix& tg, const Matrix& tl);

// Flags line u when |pred_u| >= rho * limit_u; records the flow sign.
OverflowFlags check_overflow(const Vector& pf_pred, const Vector& limits,
                             double rho = 1.0);

}  // namespace gridflow
