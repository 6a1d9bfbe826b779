#include "gridflow/grid_matrices.hpp"

#include <set>

namespace gridflow {

GridMatrices build_matrices(const NetworkCase& nc, double meter_sigma) {
    const auto nb = static_cast<Eigen::Index>(nc.n_buses());
    const auto ml = static_cast<Eigen::Index>(nc.n_lines());

    GridMatrices gm;
    gm.Bfull = Matrix::Zero(nb, nb);
    for (const Line& l : nc.lines) {
        const int i = nc.bus_index(l.from);
        const int j = nc.bus_index(l.to);
        const double b = 1.0 / l.x;
        gm.Bfull(i, j) -= b;
        gm.Bfull(j, i) -= b;
        gm.Bfull(i, i) += b;
        gm.Bfull(j, j) += b;
    }

    // Reference bus is column 0; removing it leaves an n_b x (n_b-1)
    // map from reduced angles to injections.
    Matrix Bred = gm.Bfull.rightCols(nb - 1);
    Eigen::JacobiSVD<Matrix> svd(Bred);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) < 1e-10 * sv(0)) {
        throw CaseError("susceptance matrix is rank deficient (network disconnected)");
    }
    gm.T = pinv(Bred);

    gm.Hflow = Matrix::Zero(ml, nb - 1);
    for (Eigen::Index u = 0; u < ml; ++u) {
        const Line& l = nc.lines[u];
        const int i = nc.bus_index(l.from);
        const int j = nc.bus_index(l.to);
        const double b = 1.0 / l.x;
        if (i > 0) gm.Hflow(u, i - 1) += b;
        if (j > 0) gm.Hflow(u, j - 1) -= b;
    }
    gm.HT = gm.Hflow * gm.T;

    std::set<int> gen_bus_idx;
    for (const Generator& g : nc.generators) {
        gen_bus_idx.insert(nc.bus_index(g.bus));
    }
    for (const Generator& g : nc.generators) {
        gm.gen_cols.push_back(nc.bus_index(g.bus));
    }
    for (Eigen::Index i = 0; i < nb; ++i) {
        if (!gen_bus_idx.count(static_cast<int>(i))) {
            gm.load_cols.push_back(static_cast<int>(i));
        }
    }
    // Loads co-located with a generator get their own slot.
    std::set<int> extra;
    for (const Load& l : nc.loads) {
        const int i = nc.bus_index(l.bus);
        if (gen_bus_idx.count(i) && extra.insert(i).second) {
            gm.load_cols.push_back(i);
        }
    }

    gm.Tg.resize(nb - 1, static_cast<Eigen::Index>(gm.gen_cols.size()));
    for (std::size_t c = 0; c < gm.gen_cols.size(); ++c) {
        gm.Tg.col(static_cast<Eigen::Index>(c)) = gm.T.col(gm.gen_cols[c]);
    }
    gm.TL.resize(nb - 1, static_cast<Eigen::Index>(gm.load_cols.size()));
    for (std::size_t c = 0; c < gm.load_cols.size(); ++c) {
        gm.TL.col(static_cast<Eigen::Index>(c)) = gm.T.col(gm.load_cols[c]);
    }

    // One net-injection meter per bus.
    gm.Hobs = Bred;
    const double var = meter_sigma > 0 ? meter_sigma * meter_sigma : 1.0;
    gm.Rdiag = Vector::Constant(nb, var);
    return gm;
}

}  // namespace gridflow
