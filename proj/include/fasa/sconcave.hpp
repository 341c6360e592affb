#pragma once

#include <optional>

#include "fasa/bodies.hpp"
#include "fasa/legendre.hpp"
#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"

namespace fasa {

/// Parameters of the analytic profile family
///   f(x) = scale * (1 - s q(x))_+^{alpha/s},  q(x) = <Qx, x>/2,
/// whose support is the open ellipsoid {q < 1/s}. alpha = 1 keeps psi = q;
/// alpha = 1/2 covers the extremal profiles of the sharp inequalities.
struct SProfileData {
    double alpha = 1.0;
    QuadraticForm q;
    double scale = 1.0;
};

/// Upper semi-continuous s-concave function f >= 0 (f^s concave on its
/// support) together with its induced convex potential psi = (1 - f^s)/s.
struct SConcaveFunction {
    double s = 1.0;
    int dim = 1;
    std::function<double(const Vec&)> profile;  // f, zero outside the support
    Box support_box;
    bool smooth = false;  // C^2 with nonzero Hessian and f^s -> 0 at the boundary
    std::optional<SProfileData> data;

    double f(const Vec& x) const { return profile(x); }
    bool in_support(const Vec& x) const;

    double psi_value(const Vec& x) const;  // +inf outside the support
    Vec psi_gradient(const Vec& x) const;
    Mat psi_hessian(const Vec& x) const;
    ConvexFunctionOracle psi_oracle() const;

    /// Quadratic describing the dual support (1/s) S_f^polar; fixture only.
    QuadraticForm dual_support_quadratic() const;
    Box dual_support_box() const;

    static SConcaveFunction profile_family(double s, double alpha, QuadraticForm q,
                                           double scale = 1.0);
    /// Extremal profile c0 (1 - s|Ax|^2)^(1/(2s)) normalized to unit mass.
    static SConcaveFunction equality_family(double s, const Mat& A);
    static SConcaveFunction indicator_ball(double s, int n);
};

/// Mass integral of f; fixtures integrate through a boundary-flattening
/// substitution over the support ellipsoid.
IntegrationResult s_mass(const SConcaveFunction& fs, const IntegrationSpec& spec = {});

/// Rescaled copy with unit mass (fixture data required).
SConcaveFunction s_normalized(const SConcaveFunction& fs, const IntegrationSpec& spec = {});

/// f_dual(y) = inf over the support of (1 - s<x,y>)_+^(1/s) / f(x).
double s_dual_at(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts = {});

struct SStarValue {
    double value = 0.0;
    Vec argmax;
};

/// psi*_s(y) = sup over the support of (<x,y> - psi)/(1 - s psi); throws
/// OutsideDualSupport when the supremum diverges (y outside (1/s) S_f^polar).
SStarValue psi_star_s(const SConcaveFunction& fs, const Vec& y,
                      const SolverOptions& opts = {});

/// Dual profile (1 - s psi*_s(y))_+^(1/s); zero outside the dual support.
double s_dual_profile(const SConcaveFunction& fs, const Vec& y,
                      const SolverOptions& opts = {});

/// Residual of (1 - s psi*_s(y)) (1 + s psi*(y / (1 - s psi*_s(y)))) = 1,
/// the bridge between the two dualities; psi* is the classical conjugate.
double implicit_relation_residual(const SConcaveFunction& fs, const Vec& y,
                                  const SolverOptions& opts = {});

struct TMapValue {
    Vec y;
    double jacobian = 0.0;  // analytic |det dT|
};

/// Change of variables y = grad psi / (1 + s(<grad psi, x> - psi)) with its
/// analytic Jacobian; IrregularPoint outside X_psi.
TMapValue t_map(const SConcaveFunction& fs, const Vec& x,
                double det_tol = kDetTolDefault);

/// The same map built from the dual potential, used for round-trip probes.
Vec t_map_dual(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts = {});

/// Functional surface area of the s-concave profile:
/// (1/(1+ns)) int (1-s psi)^((1/s-1)(1-lambda)) (det hess psi)^lambda
///                 / (1 + s(<x,grad psi> - psi))^(lambda(n+1/s+1)-1) dx.
IntegrationResult as_lambda_s(double lambda, const SConcaveFunction& fs,
                              const IntegrationSpec& spec = {},
                              double det_tol = kDetTolDefault);

/// Same functional on the dual side, evaluated pointwise from the inner
/// optimization (value/gradient from the maximizer, Hessian by finite
/// differences of the gradient).
IntegrationResult as_lambda_s_dual(double lambda, const SConcaveFunction& fs,
                                   const IntegrationSpec& spec = {},
                                   double det_tol = kDetTolDefault);

struct SDualityReport {
    double primal = 0.0;
    double dual = 0.0;
    double residual = 0.0;
    double combined_error = 0.0;
};

SDualityReport duality_s_check(double lambda, const SConcaveFunction& fs,
                               const IntegrationSpec& spec = {});

struct SHolderReport {
    double as_value = 0.0;
    double mass = 0.0;       // int f
    double dual_mass = 0.0;  // int f_dual
    double bound = 0.0;      // mass^(1-lambda) dual_mass^lambda
    double margin = 0.0;     // bound - as for lambda in [0,1], reversed outside
    bool reversed = false;
    double combined_error = 0.0;
};

SHolderReport holder_s_check(double lambda, const SConcaveFunction& fs,
                             const IntegrationSpec& spec = {});

struct SLogSobReport {
    double lhs = 0.0;  // int log det hess psi dmu
    double rhs = 0.0;
    double margin = 0.0;   // rhs - lhs
    double entropy = 0.0;  // S(mu)
    double mass = 0.0;     // total mass of the reference measure (should be 1)
    double santalo_product = 0.0;
    double santalo_bound = 0.0;
    double santalo_margin = 0.0;
    double combined_error = 0.0;
};

SLogSobReport s_logsob_check(const SConcaveFunction& fs, const IntegrationSpec& spec = {});

/// Lifted body K_s(f) in dimension n + 1/s (s = 1/k); radial oracle by
/// bisection along rays.
ConvexBody lift_body(const SConcaveFunction& fs);

struct LiftReport {
    double p = 0.0;
    double lhs = 0.0;  // (1 + ns) as_lambda_s(psi)
    double rhs = 0.0;  // as_p(K_s(f)) / (s^(n/2) vol(S^(1/s - 1)))
    double residual = 0.0;
    double combined_error = 0.0;
};

LiftReport lift_body_check(const SConcaveFunction& fs, double lambda,
                           const IntegrationSpec& spec = {});

/// Sharp dual-mass product bound (pi/s)^n Gamma(1+1/(2s))^2 / Gamma(1+n/2+1/(2s))^2.
double s_santalo_bound(int n, double s);

}  // namespace fasa
