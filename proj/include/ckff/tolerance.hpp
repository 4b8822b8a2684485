#pragma once

#include <Eigen/Core>

namespace ckff {

/// Comparison threshold policy. Every numerical decision in the library
/// compares against `scale(n, norm) = rel * n * max(1, norm) + abs`.
class Tolerance {
public:
    static constexpr double kDefaultRel = 1e-9;
    static constexpr double kDefaultAbs = 1e-12;

    Tolerance() = default;
    Tolerance(double rel, double abs);

    double rel() const noexcept { return rel_; }
    double abs() const noexcept { return abs_; }

    double scale(Eigen::Index n, double norm) const noexcept;

    bool operator==(const Tolerance&) const = default;

private:
    double rel_ = kDefaultRel;
    double abs_ = kDefaultAbs;
};

}  // namespace ckff
