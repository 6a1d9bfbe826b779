#pragma once

#include <vector>

#include "gridflow/network.hpp"
#include "gridflow/numerics.hpp"

namespace gridflow {

// Static matrices of the DC model, built once per case. Bus 0 of the
// case's bus list is the reference (angle fixed at zero); all reduced
// quantities are indexed over the remaining n_b-1 buses in list order.
struct GridMatrices {
    Matrix Bfull;   // n_b x n_b nodal susceptance matrix
    Matrix T;       // (n_b-1) x n_b, pinv of Bfull with reference column removed
    Matrix Hflow;   // m_l x (n_b-1), reduced angles -> line flows
    Matrix Tg;      // (n_b-1) x n_g, columns of T at generator buses
    Matrix TL;      // (n_b-1) x n_L, columns of T at load slots
    Matrix Hobs;    // observation matrix: net-injection meters, one per bus
    Vector Rdiag;   // diagonal of the measurement covariance (sigma^2)
    Matrix HT;      // Hflow * T, injection-to-flow sensitivities

    // Bus index (position in case.buses) backing each Tg / TL column.
    std::vector<int> gen_cols;
    std::vector<int> load_cols;

    Eigen::Index n_buses() const { return Bfull.rows(); }
    Eigen::Index n_lines() const { return Hflow.rows(); }
};

// Builds every matrix above. Load slots cover every non-generator bus
// (zero-injection slot when no load is attached); a load sitting on a
// generator bus gets an extra slot so generator and load injections at
// that bus stay separable.
//
// meter_sigma is the per-meter measurement noise standard deviation
// backing Rdiag (sigma = 0 means noiseless, Rdiag = 1 for weighting).
GridMatrices build_matrices(const NetworkCase& nc, double meter_sigma = 0.0);

}  // namespace gridflow
