#pragma once

#include <memory>
#include <vector>

#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"

namespace fasa {

/// Exact conjugate of a centered quadratic: matrix inverts, offset negates.
QuadraticForm legendre_quadratic(const QuadraticForm& q);

struct SolverOptions {
    int max_iters = 300;
    double tol = 1e-12;
    double slope_margin = 1e-6;  // outward slope above this at the box edge => Unbounded
    int restarts_extra = 0;      // additional random starts beyond center + face midpoints
    std::uint64_t seed = 0;
};

struct LegendreValue {
    double value = 0.0;
    Vec argmax;
};

/// psi*(y) = sup_x (<x,y> - psi(x)) by multi-start projected gradient ascent
/// over the oracle's bounding box. Throws Unbounded when the best iterate
/// sits on the box edge with outward slope above the margin.
LegendreValue legendre_at(const ConvexFunctionOracle& psi, const Vec& y,
                          const SolverOptions& opts = {});

/// Oracle for psi built from pointwise conjugation: eval solves the sup,
/// gradient is the maximizer, Hessian is the inverse primal Hessian at the
/// maximizer. Evaluations outside the reachable slope range give +inf.
ConvexFunctionOracle dual_oracle(const ConvexFunctionOracle& psi,
                                 const SolverOptions& opts = {});

/// Values on a rectangular grid, +inf allowed; carrier for discrete
/// conjugation. Row-major with the last axis fastest.
struct GridFunction {
    std::vector<Vec> axes;  // strictly increasing, uniform; n <= 3
    std::vector<double> values;

    int dim() const { return static_cast<int>(axes.size()); }
    long size() const {
        long t = 1;
        for (const auto& a : axes) t *= a.size();
        return t;
    }
    double& at(const std::vector<long>& idx);
    double at(const std::vector<long>& idx) const;

    static GridFunction sample(const ConvexFunctionOracle& psi, const Box& box,
                               long points_per_axis);
    void write_csv(std::ostream& os) const;
    static GridFunction read_csv(std::istream& is);
};

/// Discrete Legendre conjugate via the linear-time monotone-breakpoint pass
/// applied per axis. Dual axes are derived from the slope range when not
/// supplied.
GridFunction legendre_grid(const GridFunction& g);
GridFunction legendre_grid_on(const GridFunction& g, const std::vector<Vec>& dual_axes);

struct YoungReport {
    long pairs = 0;
    long inequality_violations = 0;
    double worst_inequality_gap = 0.0;   // most negative psi(x)+psi*(y)-<x,y>
    double worst_equality_residual = 0.0;
    long regular_points = 0;
};

/// Fenchel-Young inequality on the pair list plus the gradient equality
/// psi*(grad psi(x)) = <x, grad psi(x)> - psi(x) at regular x.
YoungReport young_check(const ConvexFunctionOracle& psi,
                        const std::vector<std::pair<Vec, Vec>>& pairs,
                        double tol = 1e-8, const SolverOptions& opts = {});

struct McCannReport {
    double lhs = 0.0;  // integral of f(grad psi) det hess psi over X_psi
    double rhs = 0.0;  // integral of f over X_{psi*}
    double residual = 0.0;
    double combined_error = 0.0;
};

/// Change-of-variables identity: pushforward of f through the gradient map
/// against the direct dual-side integral, matched budgets.
McCannReport mccann_identity_check(const ConvexFunctionOracle& psi,
                                   const Integrand& f,
                                   const IntegrationSpec& spec = {},
                                   double det_tol = kDetTolDefault);

}  // namespace fasa
