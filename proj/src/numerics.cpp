#include "gridflow/numerics.hpp"

#include <stdexcept>

namespace gridflow {

Matrix pinv(const Matrix& a, double tol) {
    if (a.size() == 0) return Matrix(a.cols(), a.rows());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
    Vector inv_sv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

Matrix nullspace_basis(const Matrix& a, double tol) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
    }
    return svd.matrixV().rightCols(a.cols() - rank);
}

Vector project_onto_columns(const Matrix& mb, const Vector& v) {
    if (mb.cols() == 0) return Vector::Zero(v.size());
    Matrix gram = mb.transpose() * mb;
    Eigen::FullPivLU<Matrix> lu(gram);
    if (!lu.isInvertible()) {
        throw std::runtime_error(
            "project_onto_columns: basis columns are numerically dependent");
    }
    return mb * lu.solve(mb.transpose() * v);
}

}  // namespace gridflow
