#pragma once

#include <string>
#include <vector>

#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"

namespace fasa {

/// Convex body with 0 in its interior, described through its gauge
/// (Minkowski functional) and support function. Closed-form fixtures carry
/// their parameters so polarity and curvature stay exact.
struct ConvexBody {
    int dim = 0;
    std::string kind;  // ball | ellipsoid | pball | polytope | lift | generic
    std::function<double(const Vec&)> gauge;
    std::function<double(const Vec&)> support;
    std::function<Vec(const Vec&)> gauge_grad;        // nullable -> finite differences
    std::function<double(const Vec&)> curvature_fn;   // nullable -> FD estimators
    bool origin_interior = true;
    bool smooth_positive_curvature = false;

    // fixture parameters (set according to kind)
    Mat ellipsoid_matrix;
    double pball_exponent = 2.0;
    std::vector<Vec> vertices;
    std::vector<Vec> halfspaces;  // gauge(x) = max_i <a_i, x>

    double radial(const Vec& u) const { return 1.0 / gauge(u); }
    Vec boundary_point(const Vec& u) const { return radial(u) * u; }
    Vec gauge_gradient(const Vec& x) const;
    /// Outer unit normal at a boundary point, the normalized gauge gradient.
    Vec normal(const Vec& x) const;

    /// psi = gauge^2/2 as a convex oracle (analytic derivatives for
    /// ellipsoids, finite differences otherwise).
    ConvexFunctionOracle gauge_squared_oracle() const;
};

ConvexBody make_ball(int n);
ConvexBody make_ellipsoid(const Mat& M);  // gauge = sqrt(<Mx, x>)
ConvexBody make_pball(int n, double q);   // gauge = l_q norm
ConvexBody make_cube(int n);              // l_inf ball
ConvexBody make_cross_polytope(int n);    // l_1 ball
ConvexBody make_polytope(std::vector<Vec> vertices, std::vector<Vec> halfspaces);

/// Polar body: gauge and support swap roles; closed-form where the fixture
/// allows (ellipsoid matrix inverts, p-ball exponent conjugates).
ConvexBody polar(const ConvexBody& K);

enum class CurvatureMethod { tangent_hessian, gauge_square_lemma };

/// Gauss curvature at a boundary point, by the tangent-restricted Hessian of
/// the gauge or through det hess(gauge^2/2) * <x,N>^(n+1). Throws FlatPoint
/// below the tolerance.
double curvature(const ConvexBody& K, const Vec& x,
                 CurvatureMethod method = CurvatureMethod::tangent_hessian,
                 double flat_tol = 1e-8);

/// |K| = (1/n) * integral of r(u)^n over the sphere.
IntegrationResult body_volume(const ConvexBody& K, const IntegrationSpec& spec = {});

/// L_p-affine surface area through the radial parametrization
/// x = r(u) u, d mu_K = r(u)^n / <x, N_K(x)> du.
IntegrationResult as_p_body(const ConvexBody& K, double p, const IntegrationSpec& spec = {});

/// Sampled fraction of boundary directions with curvature above the mask.
double positive_curvature_fraction(const ConvexBody& K, long samples = 4096,
                                   double flat_tol = 1e-8);

struct BridgeReport {
    double functional = 0.0;  // as_{p/(n+p)}(gauge^2/2)
    double body = 0.0;        // (2 pi)^{n/2} / (n |B_2^n|) * as_p(K)
    double residual = 0.0;
    double combined_error = 0.0;
};

/// Functional-vs-body bridge at lambda = p/(n+p); both sides computed by
/// independent quadratures (box lattice vs sphere rule).
BridgeReport theorem_norm_check(const ConvexBody& K, double p,
                                const IntegrationSpec& spec = {});

struct AspDualityReport {
    double primal = 0.0;  // as_p(K)
    double dual = 0.0;    // as_{n^2/p}(K polar)
    double residual = 0.0;
    double combined_error = 0.0;
};

AspDualityReport asp_duality_check(const ConvexBody& K, double p,
                                   const IntegrationSpec& spec = {});

struct BodyIsoperimetricReport {
    double ratio = 0.0;   // as_p(K) / as_p(ball)
    double bound = 0.0;   // (|K|/|ball|)^((n-p)/(n+p))
    double margin = 0.0;  // bound - ratio for p >= 0; ratio - bound for p in (-n, 0)
    double combined_error = 0.0;
    bool reversed = false;
};

BodyIsoperimetricReport lp_isoperimetric_check(const ConvexBody& K, double p,
                                               const IntegrationSpec& spec = {});

double unit_ball_volume(int n);
double sphere_surface(int n);  // vol_{n-1}(S^{n-1})

}  // namespace fasa
