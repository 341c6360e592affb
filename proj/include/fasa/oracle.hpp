#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fasa/errors.hpp"
#include "fasa/linalg.hpp"

namespace fasa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// e^{-psi} is treated as zero once psi exceeds its minimum sampled value by
/// this amount; bounding boxes are sized to contain the corresponding level set.
inline constexpr double kLogTailCutoff = 40.0;

inline constexpr double kDetTolDefault = 1e-10;

enum class DomainLocation { interior, boundary, outside };

/// Central-difference step schedule, balancing truncation against rounding.
inline double fd_step(const Vec& x) {
    return std::max(1e-5, 1e-4 * (1.0 + x.norm()));
}

/// A convex function psi: R^n -> R u {+inf} given by evaluation plus optional
/// analytic derivatives. Immutable after construction; safe to share across
/// threads.
struct ConvexFunctionOracle {
    int dim = 0;
    std::function<double(const Vec&)> eval;
    std::function<Vec(const Vec&)> grad;    // nullable: fall back to finite differences
    std::function<Mat(const Vec&)> hess;    // nullable
    std::function<DomainLocation(const Vec&)> domain;  // nullable: classify by finiteness
    Box bounding_box;

    double value(const Vec& x) const { return eval(x); }

    DomainLocation locate(const Vec& x) const {
        if (domain) return domain(x);
        return std::isfinite(eval(x)) ? DomainLocation::interior : DomainLocation::outside;
    }

    bool has_analytic_grad() const { return static_cast<bool>(grad); }
    bool has_analytic_hess() const { return static_cast<bool>(hess); }

    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
};

/// psi(x) = <A(x-z), x-z>/2 + a with A symmetric positive definite.
struct QuadraticForm {
    Mat A;
    Vec center;
    double offset = 0.0;

    QuadraticForm() = default;
    QuadraticForm(Mat A_, Vec center_, double offset_ = 0.0);

    int dim() const { return static_cast<int>(A.rows()); }
    double value(const Vec& x) const {
        Vec d = x - center;
        return 0.5 * d.dot(A * d) + offset;
    }
    Vec gradient(const Vec& x) const { return A * (x - center); }
    const Mat& hessian() const { return A; }

    ConvexFunctionOracle oracle() const;

    static QuadraticForm isotropic(int n) {
        return QuadraticForm(Mat::Identity(n, n), Vec::Zero(n), 0.0);
    }
};

/// Smooth strictly convex test family: a positive-definite quadratic base plus
/// softplus ridges. The Hessian dominates the base matrix everywhere, so the
/// family satisfies every C^2 hypothesis used downstream.
struct RidgeTerm {
    double weight = 0.0;  // >= 0
    Vec direction;        // unit vector
    double bias = 0.0;
};

struct SmoothConvexFamily {
    QuadraticForm base;
    std::vector<RidgeTerm> ridges;
    std::uint64_t seed = 0;

    int dim() const { return base.dim(); }
    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;

    ConvexFunctionOracle oracle() const;

    /// Seeded random instance: random SPD base, 2-4 ridges.
    static SmoothConvexFamily random(int n, std::uint64_t seed);
};

Vec fd_gradient(const ConvexFunctionOracle& psi, const Vec& x, double h);
Mat fd_hessian(const ConvexFunctionOracle& psi, const Vec& x, double h);

inline Vec fd_gradient(const ConvexFunctionOracle& psi, const Vec& x) {
    return fd_gradient(psi, x, fd_step(x));
}
inline Mat fd_hessian(const ConvexFunctionOracle& psi, const Vec& x) {
    return fd_hessian(psi, x, fd_step(x));
}

/// Membership in X_psi: interior point whose Hessian exists and has
/// determinant >= det_tol. Points outside the domain return false.
bool in_regular_set(const ConvexFunctionOracle& psi, const Vec& x,
                    double det_tol = kDetTolDefault);

/// psi_z(x) = psi(z + x).
ConvexFunctionOracle translate(const ConvexFunctionOracle& psi, const Vec& z);

/// x -> psi(A x) for invertible A.
ConvexFunctionOracle compose_linear(const ConvexFunctionOracle& psi, const Mat& A,
                                    double det_tol = 1e-12);

/// Bounding box of {psi <= psi(anchor) + kLogTailCutoff} estimated by ray
/// search along axis and diagonal directions, with a 5% margin.
Box estimate_bounding_box(const std::function<double(const Vec&)>& eval, int dim,
                          const Vec& anchor);

/// Oracle over a rectangular table of values, multilinear interpolation
/// inside, +inf outside. Derivatives fall back to finite differences.
ConvexFunctionOracle grid_oracle(const std::vector<Vec>& axes,
                                 const std::vector<double>& values_row_major);

}  // namespace fasa
