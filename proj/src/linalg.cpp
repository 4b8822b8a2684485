#include "ckff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ckff/error.hpp"

namespace ckff {

Tolerance::Tolerance(double rel, double abs) : rel_(rel), abs_(abs)
{
    if (!(rel > 0.0) || !std::isfinite(rel) || !(abs >= 0.0) || !std::isfinite(abs)) {
        throw Error(ErrorKind::InvalidArgument, "tolerance requires rel > 0 and abs >= 0");
    }
}

double Tolerance::scale(Eigen::Index n, double norm) const noexcept
{
    return rel_ * static_cast<double>(n) * std::max(1.0, norm) + abs_;
}

Operator::Operator(Matrix m) : m_(std::move(m))
{
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "operator must be square with positive dimension, got " +
                        std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    if (!m_.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "operator has non-finite entries");
    }
}

Operator Operator::identity(Index n) { return Operator(Matrix::Identity(n, n)); }

Operator Operator::zero(Index n) { return Operator(Matrix::Zero(n, n)); }

Operator Operator::diagonal(const Vector& d) { return Operator(d.asDiagonal().toDenseMatrix()); }

Operator Operator::scalar(Index n, Complex c) { return Operator(c * Matrix::Identity(n, n)); }

Vector Operator::operator()(const Vector& f) const
{
    if (f.size() != dim()) {
        throw Error(ErrorKind::InvalidArgument, "vector dimension does not match operator");
    }
    return m_ * f;
}

namespace {

void require_same_dim(const Operator& a, const Operator& b)
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::InvalidArgument, "operator dimensions differ");
    }
}

}  // namespace

Operator operator+(const Operator& a, const Operator& b)
{
    require_same_dim(a, b);
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b)
{
    require_same_dim(a, b);
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b)
{
    require_same_dim(a, b);
    return Operator(a.m_ * b.m_);
}

Operator operator*(Complex c, const Operator& a) { return Operator(c * a.m_); }

Subspace::Subspace(Matrix basis, const Tolerance& tol) : basis_(std::move(basis))
{
    if (basis_.rows() == 0) {
        throw Error(ErrorKind::InvalidArgument, "subspace ambient dimension must be positive");
    }
    if (basis_.cols() > basis_.rows()) {
        throw Error(ErrorKind::InvalidArgument, "subspace has more basis vectors than dimensions");
    }
    if (!basis_.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "subspace basis has non-finite entries");
    }
    if (basis_.cols() > 0) {
        const Index k = basis_.cols();
        const Matrix gram = basis_.adjoint() * basis_;
        const double defect = spectral_norm(gram - Matrix::Identity(k, k));
        if (defect > tol.scale(basis_.rows(), 1.0)) {
            throw Error(ErrorKind::InvalidArgument,
                        "subspace basis is not orthonormal (defect " + std::to_string(defect) + ")");
        }
    }
}

Subspace Subspace::zero(Index ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

double spectral_norm(const Matrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace ckff
