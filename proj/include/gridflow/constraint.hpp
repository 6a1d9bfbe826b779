#pragma once

#include "gridflow/forecast.hpp"
#include "gridflow/numerics.hpp"

namespace gridflow {

enum class ConstraintMode { Normal, Correct, Penalty };

const char* to_string(ConstraintMode m);

// Builds Hv: flagged rows of Hflow pre-multiplied by the violation
// sign (so every violation is a positive excess), zero elsewhere.
Matrix build_violation_matrix(const OverflowFlags& flags, const Matrix& h_flow);

// Particular solution neutralizing the load variation's effect on the
// flagged lines: -(Hv Tg)^+ Hv TL dpl.
Vector particular_correction(const Matrix& hv, const Matrix& tg,
                             const Matrix& tl, const Vector& dpl);

// Projection of the dispatch update onto ker(Hv Tg), so the flagged
// flows are untouched by it.
Vector kernel_correction(const Matrix& hv_tg, const Vector& dpg);

// PI penalty pushing actually-violated flows back under their limits.
// Keeps the previous per-line excess between calls. The integral term
// is scaled by tau so kfi is a per-second gain.
class PenaltyState {
public:
    PenaltyState(Eigen::Index n_lines, double kfp, double kfi, double tau = 1.0);

    // live_flows/limits are p.u.; flags mark the lines currently
    // violated (live, not predicted). Returns dpg_pi.
    Vector update(const OverflowFlags& flags, const Vector& live_flows,
                  const Vector& limits, const Matrix& hv_tg);

    void reset();

private:
    double kfp_;
    double kfi_;
    double tau_;
    Vector prev_excess_;
};

struct ConstrainResult {
    Vector dpg_star;
    ConstraintMode mode = ConstraintMode::Normal;
};

// One pass of the constraint layer: pass the DED update through when
// nothing is flagged, replace it with particular + kernel corrections
// on a predicted overflow, and add the PI penalty on a live overflow.
ConstrainResult constrain_step(const Vector& dpg, const OverflowFlags& predicted,
                               const OverflowFlags& live,
                               const Vector& dpl_pred, const Vector& live_flows,
                               const Vector& limits, const Matrix& h_flow,
                               const Matrix& tg, const Matrix& tl,
                               PenaltyState& penalty, bool penalty_enabled);

}  // namespace gridflow
