#include "gridflow/constraint.hpp"

namespace gridflow {

const char* to_string(ConstraintMode m) {
    switch (m) {
        case ConstraintMode::Normal: return "normal";
        case ConstraintMode::Correct: return "correct";
        case ConstraintMode::Penalty: return "penalty";
    }
    return "?";
}

Matrix build_violation_matrix(const OverflowFlags& flags, const Matrix& h_flow) {
    Matrix hv = Matrix::Zero(h_flow.rows(), h_flow.cols());
    for (Eigen::Index u = 0; u < h_flow.rows(); ++u) {
        if (flags.of[u]) hv.row(u) = flags.sign[u] * h_flow.row(u);
    }
    return hv;
}

Vector particular_correction(const Matrix& hv, const Matrix& tg,
                             const Matrix& tl, const Vector& dpl) {
    return -pinv(hv * tg) * (hv * tl * dpl);
}

Vector kernel_correction(const Matrix& hv_tg, const Vector& dpg) {
    Matrix mb = nullspace_basis(hv_tg);
    if (mb.cols() == 0) return Vector::Zero(dpg.size());
    return project_onto_columns(mb, dpg);
}

PenaltyState::PenaltyState(Eigen::Index n_lines, double kfp, double kfi,
                           double tau)
    : kfp_(kfp), kfi_(kfi), tau_(tau), prev_excess_(Vector::Zero(n_lines)) {}

void PenaltyState::reset() { prev_excess_.setZero(); }

Vector PenaltyState::update(const OverflowFlags& flags, const Vector& live_flows,
                            const Vector& limits, const Matrix& hv_tg) {
    const Eigen::Index ml = live_flows.size();
    Vector fs = Vector::Zero(ml);
    Vector excess = Vector::Zero(ml);
    for (Eigen::Index u = 0; u < ml; ++u) {
        if (!flags.of[u]) continue;  // excess memory resets when unflagged
        excess(u) = flags.sign[u] * live_flows(u) - limits(u);
        fs(u) = kfp_ * (excess(u) - prev_excess_(u)) + tau_ * kfi_ * excess(u);
    }
    prev_excess_ = excess;
    return -pinv(hv_tg) * fs;
}

ConstrainResult constrain_step(const Vector& dpg, const OverflowFlags& predicted,
                               const OverflowFlags& live,
                               const Vector& dpl_pred, const Vector& live_flows,
                               const Vector& limits, const Matrix& h_flow,
                               const Matrix& tg, const Matrix& tl,
                               PenaltyState& penalty, bool penalty_enabled) {
    const bool live_over = penalty_enabled && live.any();
    if (!predicted.any() && !live_over) {
        penalty.reset();
        return {dpg, ConstraintMode::Normal};
    }

    // One Hv covers both paths: a line enters it when either the
    // prediction or the live estimate flags it.
    OverflowFlags merged = predicted;
    for (std::size_t u = 0; u < merged.of.size(); ++u) {
        if (live.of[u] && !merged.of[u]) {
            merged.of[u] = 1;
            merged.sign[u] = live.sign[u];
        }
    }
    Matrix hv = build_violation_matrix(merged, h_flow);
    Matrix hv_tg = hv * tg;

    Vector dpg_star = particular_correction(hv, tg, tl, dpl_pred) +
                      kernel_correction(hv_tg, dpg);
    ConstraintMode mode = ConstraintMode::Correct;
    if (live_over) {
        dpg_star += penalty.update(live, live_flows, limits, hv_tg);
        mode = ConstraintMode::Penalty;
    } else {
        penalty.reset();
    }
    return {dpg_star, mode};
}

}  // namespace gridflow
