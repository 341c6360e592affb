#pragma once

#include <functional>
#include <vector>

#include "fasa/legendre.hpp"
#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"

namespace fasa {

/// Weight pair (F1, F2) entering the generalized surface-area integral,
/// together with the geometric-mean envelope F used by the affine
/// isoperimetric bounds.
struct WeightPair {
    std::function<double(double)> F1;
    std::function<double(double)> F2;
    bool identical = false;
    bool log_concave = false;
    bool non_increasing = false;

    /// F(t) = sup over (t1+t2)/2 >= t of sqrt(F1(t1) F2(t2)). Collapses to F1
    /// when F1 = F2 is log-concave and non-increasing.
    double envelope(double t) const;

    static WeightPair exponential();
};

/// as_lambda(F1, F2, psi): integral of
///   (F1 o psi)^(1-lambda) (F2 o (<x,grad psi> - psi))^lambda (det hess psi)^lambda
/// over X_psi (lambda <= 0) or the domain interior (lambda > 0).
IntegrationResult as_general(const WeightPair& w, double lambda,
                             const ConvexFunctionOracle& psi,
                             const IntegrationSpec& spec = {},
                             double det_tol = kDetTolDefault);

/// Specialization to F1 = F2 = exp(-t).
IntegrationResult as_lambda(double lambda, const ConvexFunctionOracle& psi,
                            const IntegrationSpec& spec = {},
                            double det_tol = kDetTolDefault);

/// Closed form for quadratics: (2 pi)^(n/2) (det A)^(lambda - 1/2)
/// exp((2 lambda - 1) a) exp(lambda^2 <A z, z> / 2).
double as_lambda_quadratic(const QuadraticForm& q, double lambda);

struct DualityReport {
    double primal = 0.0;
    double dual = 0.0;
    double residual = 0.0;        // |primal - dual| / max(|primal|, |dual|)
    double combined_error = 0.0;  // sum of the two quadrature error estimates
};

/// as_lambda(F1,F2,psi) against as_{1-lambda}(F2,F1,psi*). When no conjugate
/// oracle is supplied one is built pointwise from psi.
DualityReport duality_residual(const WeightPair& w, double lambda,
                               const ConvexFunctionOracle& psi,
                               const IntegrationSpec& spec = {},
                               const ConvexFunctionOracle* psi_star = nullptr,
                               double det_tol = kDetTolDefault);

struct AsaProfile {
    std::vector<double> lambdas;
    std::vector<double> log_values;
    std::vector<double> log_errors;  // propagated relative errors
};

struct ConvexityViolation {
    int i = 0, j = 0;  // endpoints; midpoint index is (i+j)/2
    double excess = 0.0;
};

struct ConvexityReport {
    AsaProfile profile;
    std::vector<ConvexityViolation> violations;
};

/// Midpoint convexity of lambda -> log as_lambda over the grid; violations
/// beyond the propagated error budget are listed.
ConvexityReport log_convexity_check(const ConvexFunctionOracle& psi,
                                    const std::vector<double>& lambda_grid,
                                    const IntegrationSpec& spec = {});

struct IsoperimetricReport {
    double as_value = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - as for lambda in [0,1/2]; as - bound for lambda < 0
    double combined_error = 0.0;
    bool reversed = false;  // lambda < 0 branch
};

/// Corollary-style bound as_lambda(psi) vs (2pi)^(n lambda) Z^(1-2 lambda)
/// after one exact barycenter translation.
IsoperimetricReport isoperimetric_check(double lambda, const ConvexFunctionOracle& psi,
                                        const IntegrationSpec& spec = {});

struct SantaloReport {
    double z_primal = 0.0;       // integral of e^{-psi}
    double z_dual = 0.0;         // integral of e^{-psi*}
    double product = 0.0;
    double bound = 0.0;          // (2 pi)^n
    double margin = 0.0;         // bound - product
    double combined_error = 0.0;
    double reverse_constant = 0.0;  // product^(1/n), empirical lower bound
    std::vector<double> as_products;  // as_lambda(psi) * as_lambda(psi*) per lambda
    std::vector<double> as_lambdas;
};

SantaloReport santalo_product(const ConvexFunctionOracle& psi,
                              const IntegrationSpec& spec = {},
                              const ConvexFunctionOracle* psi_star = nullptr,
                              const std::vector<double>& lambdas = {0.0, 0.25, 0.5});

/// Translation z minimizing the dual mass; even functions return 0 without
/// search. Derivative-free compass descent on cached conjugate values.
Vec santalo_point(const ConvexFunctionOracle& psi, const IntegrationSpec& spec = {},
                  int max_iters = 200);

/// Cached lattice evaluation of (psi, <x,grad psi> - psi, det hess psi) at
/// two refinement levels, so a lambda grid sweeps in O(nodes) per value.
/// Exponential weights only.
class AsaSweep {
public:
    AsaSweep(const ConvexFunctionOracle& psi, const IntegrationSpec& spec = {},
             double det_tol = kDetTolDefault);

    IntegrationResult at(double lambda) const;
    long nodes() const { return static_cast<long>(fine_.size()); }

private:
    struct Node {
        double w, psi, dual_arg, det;
    };
    static std::vector<Node> build_level(const ConvexFunctionOracle& psi, long per_axis);
    double level_sum(const std::vector<Node>& nodes, double lambda) const;

    std::vector<Node> coarse_, fine_;
    double det_tol_;
};

struct ValuationReport {
    double lhs = 0.0;  // as(psi1) + as(psi2)
    double rhs = 0.0;  // as(max) + as(min)
    double residual = 0.0;
    double combined_error = 0.0;
};

ConvexFunctionOracle pointwise_max(const ConvexFunctionOracle& a,
                                   const ConvexFunctionOracle& b);
ConvexFunctionOracle pointwise_min(const ConvexFunctionOracle& a,
                                   const ConvexFunctionOracle& b);

/// Valuation identity as(psi1) + as(psi2) = as(max) + as(min); requires the
/// pointwise minimum to pass a midpoint-convexity probe.
ValuationReport valuation_check(const ConvexFunctionOracle& psi1,
                                const ConvexFunctionOracle& psi2, double lambda,
                                const IntegrationSpec& spec = {},
                                std::uint64_t probe_seed = 1234);

}  // namespace fasa
