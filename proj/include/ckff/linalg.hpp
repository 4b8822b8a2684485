#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ckff/tolerance.hpp"

namespace ckff {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Bounded operator on C^n, stored as a dense square matrix with finite entries.
class Operator {
public:
    explicit Operator(Matrix m);

    static Operator identity(Index n);
    static Operator zero(Index n);
    static Operator diagonal(const Vector& d);
    static Operator scalar(Index n, Complex c);

    Index dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }

    Vector operator()(const Vector& f) const;

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex c, const Operator& a);

private:
    Matrix m_;
};

/// Closed subspace of C^n, held as an n x k matrix with orthonormal columns.
class Subspace {
public:
    /// Validates `basis^H basis = I_k` against `tol`; throws InvalidArgument otherwise.
    explicit Subspace(Matrix basis, const Tolerance& tol = {});

    static Subspace zero(Index ambient_dim);

    Index ambient_dim() const noexcept { return basis_.rows(); }
    Index dim() const noexcept { return basis_.cols(); }
    const Matrix& basis() const noexcept { return basis_; }

private:
    Matrix basis_;
};

/// Largest singular value of an arbitrary (possibly rectangular) matrix.
double spectral_norm(const Matrix& m);

}  // namespace ckff
