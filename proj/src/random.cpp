#include "ckff/random.hpp"

#include <cmath>
#include <numbers>

namespace ckff {

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Index Rng::integer(Index lo, Index hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(engine_() % span);
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols)
{
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = rng.complex_normal();
        }
    }
    return m;
}

Vector gaussian_vector(Rng& rng, Index n) { return gaussian_matrix(rng, n, 1).col(0); }

Vector random_unit_vector(Rng& rng, Index n)
{
    Vector v = gaussian_vector(rng, n);
    return v / v.norm();
}

Matrix haar_unitary(Rng& rng, Index n)
{
    const Matrix z = gaussian_matrix(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so Q is Haar distributed.
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(j) *= d / mag;
        }
    }
    return q;
}

Matrix haar_frame(Rng& rng, Index n, Index k) { return haar_unitary(rng, n).leftCols(k); }

}  // namespace ckff
