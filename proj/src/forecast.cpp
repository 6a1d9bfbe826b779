#include "gridflow/forecast.hpp"

#include <algorithm>
#include <cmath>

namespace gridflow {

Ar2Coeffs fit_ar2(std::span<const double> samples) {
    if (samples.size() < 3) return {};
    const auto n = static_cast<Eigen::Index>(samples.size()) - 2;
    Matrix a(n, 2);
    Vector b(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        a(t, 0) = samples[t + 1];
        a(t, 1) = samples[t];
        b(t) = samples[t + 2];
    }
    // Minimum-norm least squares; degenerate windows (all zero,
    // constant) resolve to the pseudoinverse solution.
    Vector phi = pinv(a) * b;
    return {phi(0), phi(1)};
}

double predict_load_delta(const Ar2Coeffs& c, double d1, double d2) {
    return c.phi1 * d1 + c.phi2 * d2;
}

LoadDeltaModel::LoadDeltaModel(std::size_t window, std::size_t refit_every)
    : window_(window), refit_every_(refit_every) {}

void LoadDeltaModel::push(double delta) {
    history_.push_back(delta);
    if (history_.size() > window_) history_.pop_front();
    if (history_.size() < 3) return;
    if (!fitted_ || ++pushes_since_fit_ >= refit_every_) {
        std::vector<double> buf(history_.begin(), history_.end());
        coeffs_ = fit_ar2(buf);
        fitted_ = true;
        pushes_since_fit_ = 0;
    }
}

double LoadDeltaModel::predict() const {
    const std::size_t n = history_.size();
    if (n == 0) return 0.0;
    if (n < 3 || !fitted_) return history_.back();  // persistence cold start
    return predict_load_delta(coeffs_, history_[n - 1], history_[n - 2]);
}

bool OverflowFlags::any() const {
    return std::any_of(of.begin(), of.end(), [](int f) { return f != 0; });
}

Vector predict_line_flows(const Vector& pf_prev, const Vector& dpg,
                          const Vector& dpl, const Matrix& h_flow,
                          const Matrix& tg, const Matrix& tl) {
    return pf_prev + h_flow * (tg * dpg + tl * dpl);
}

OverflowFlags check_overflow(const Vector& pf_pred, const Vector& limits,
                             double rho) {
    OverflowFlags flags;
    const auto ml = pf_pred.size();
    flags.of.assign(ml, 0);
    flags.sign.assign(ml, 0);
    for (Eigen::Index u = 0; u < ml; ++u) {
        if (std::abs(pf_pred(u)) >= rho * limits(u)) {
            flags.of[u] = 1;
            flags.sign[u] = pf_pred(u) >= 0 ? 1 : -1;
        }
    }
    return flags;
}

}  // namespace gridflow
