#include "ckff/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ckff {

namespace {

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

void require_self_adjoint(const Operator& a, const Tolerance& tol, const char* what)
{
    const double defect = self_adjoint_defect(a);
    const double limit = tol.scale(a.dim(), op_norm(a));
    if (defect > limit) {
        throw Error(ErrorKind::NotSelfAdjoint, std::string(what) + " is not self-adjoint (||A - A*|| = " +
                                                   std::to_string(defect) + ")");
    }
}

}  // namespace

HermitianEigen hermitian_eigen(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    return {es.eigenvalues(), es.eigenvectors()};
}

Operator adjoint(const Operator& a) { return Operator(a.matrix().adjoint()); }

double op_norm(const Operator& a) { return spectral_norm(a.matrix()); }

double self_adjoint_defect(const Operator& a) { return spectral_norm(a.matrix() - a.matrix().adjoint()); }

SpectralBounds pos_bounds(const Operator& a, const Tolerance& tol)
{
    require_self_adjoint(a, tol, "operator");
    const auto eig = hermitian_eigen(a.matrix());
    return {eig.values(0), eig.values(eig.values.size() - 1)};
}

bool is_positive(const Operator& a, const Tolerance& tol)
{
    const double s = tol.scale(a.dim(), op_norm(a));
    if (self_adjoint_defect(a) > s) {
        return false;
    }
    return hermitian_eigen(a.matrix()).values(0) >= -s;
}

Operator sqrt_psd(const Operator& a, const Tolerance& tol)
{
    if (!is_positive(a, tol)) {
        throw Error(ErrorKind::NotPositive, "square root requires a positive operator");
    }
    const auto eig = hermitian_eigen(a.matrix());
    const double cut = tol.scale(a.dim(), op_norm(a));
    const Eigen::VectorXd roots = eig.values.unaryExpr([cut](double v) { return v > cut ? std::sqrt(v) : 0.0; });
    Matrix r = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return Operator(hermitian_part(r));
}

Matrix pinv(const Matrix& a, const Tolerance& tol)
{
    if (a.size() == 0) {
        return Matrix::Zero(a.cols(), a.rows());
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.scale(std::max(a.rows(), a.cols()), sv(0));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) {
            inv(i) = 1.0 / sv(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Operator pinv(const Operator& a, const Tolerance& tol) { return Operator(pinv(a.matrix(), tol)); }

Operator projection(const Subspace& w)
{
    const Matrix& b = w.basis();
    return Operator(b * b.adjoint());
}

Subspace orthonormalize_columns(const Matrix& columns, const Tolerance& tol)
{
    const Index n = columns.rows();
    if (columns.cols() == 0) {
        return Subspace::zero(n);
    }
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.scale(n, sv(0));
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) {
        ++rank;
    }
    return Subspace(svd.matrixU().leftCols(rank), tol);
}

Subspace orthonormalize(Index ambient_dim, std::span<const Vector> vectors, const Tolerance& tol)
{
    Matrix cols(ambient_dim, static_cast<Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != ambient_dim) {
            throw Error(ErrorKind::InvalidArgument, "vectors must share the ambient dimension");
        }
        cols.col(static_cast<Index>(j)) = vectors[j];
    }
    return orthonormalize_columns(cols, tol);
}

Subspace range_basis(const Operator& a, const Tolerance& tol) { return orthonormalize_columns(a.matrix(), tol); }

Subspace kernel_basis(const Operator& a, const Tolerance& tol)
{
    const Index n = a.dim();
    Eigen::JacobiSVD<Matrix> svd(a.matrix(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = tol.scale(n, sv(0));
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) {
        ++rank;
    }
    return Subspace(svd.matrixV().rightCols(n - rank), tol);
}

bool loewner_leq(const Operator& a, const Operator& b, const Tolerance& tol)
{
    require_self_adjoint(a, tol, "left operand");
    require_self_adjoint(b, tol, "right operand");
    const double s = tol.scale(a.dim(), std::max(op_norm(a), op_norm(b)));
    return hermitian_eigen((b - a).matrix()).values(0) >= -s;
}

PencilMin pencil_min(const Operator& s, const Operator& g, const Tolerance& tol)
{
    const Index n = s.dim();
    if (g.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "pencil operators differ in dimension");
    }
    require_self_adjoint(s, tol, "S");
    require_self_adjoint(g, tol, "G");
    const double g_norm = op_norm(g);
    const double g_cut = tol.scale(n, g_norm);
    if (g_norm <= g_cut) {
        throw Error(ErrorKind::ZeroPencil, "G vanishes within tolerance");
    }
    if (!is_positive(s, tol) || !is_positive(g, tol)) {
        throw Error(ErrorKind::NotPositive, "pencil operators must be positive semidefinite");
    }

    // Split H = range(G) + ker(G) along G's eigenvectors.
    const auto ge = hermitian_eigen(g.matrix());
    Index kernel_dim = 0;
    while (kernel_dim < n && ge.values(kernel_dim) <= g_cut) {
        ++kernel_dim;
    }
    const Index range_dim = n - kernel_dim;
    const Matrix qn = ge.vectors.leftCols(kernel_dim);
    const Matrix qr = ge.vectors.rightCols(range_dim);
    const Eigen::VectorXd d = ge.values.tail(range_dim);

    const Matrix sh = hermitian_part(s.matrix());
    Matrix schur = qr.adjoint() * sh * qr;
    Matrix coupling = Matrix::Zero(kernel_dim, range_dim);
    if (kernel_dim > 0) {
        const Matrix s_nn = qn.adjoint() * sh * qn;
        const Matrix s_nr = qn.adjoint() * sh * qr;
        coupling = pinv(s_nn, tol) * s_nr;
        schur -= s_nr.adjoint() * coupling;
    }

    const Eigen::VectorXd d_inv_sqrt = d.cwiseSqrt().cwiseInverse();
    const Matrix reduced = d_inv_sqrt.asDiagonal() * schur * d_inv_sqrt.asDiagonal();
    const auto re = hermitian_eigen(reduced);

    const Vector y = d_inv_sqrt.asDiagonal() * re.vectors.col(0);
    Vector f = qr * y;
    if (kernel_dim > 0) {
        f -= qn * (coupling * y);
    }
    f.normalize();
    return {std::max(0.0, re.values(0)), f};
}

}  // namespace ckff
