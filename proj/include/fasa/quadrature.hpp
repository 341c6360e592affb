#pragma once

#include <functional>
#include <string>

#include "fasa/errors.hpp"
#include "fasa/linalg.hpp"
#include "fasa/oracle.hpp"

namespace fasa {

enum class Method { lattice, adaptive, monte_carlo, importance };

std::string method_name(Method m);

struct IntegrationSpec {
    Method method = Method::lattice;
    long budget = 262144;    // max integrand evaluations, >= 1000
    double rel_tol = 1e-6;   // target relative error, in (0, 0.5)
    double tail_cutoff = kLogTailCutoff;
    std::uint64_t seed = 0;

    void validate() const;

    static IntegrationSpec lattice_default() { return {}; }
    static IntegrationSpec mc_default() {
        IntegrationSpec s;
        s.method = Method::monte_carlo;
        s.budget = 2'000'000;
        return s;
    }
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evals = 0;
    Method method = Method::lattice;
    bool converged = false;
    bool clipped_infinities = false;  // +inf integrand values were treated as 0
};

using Integrand = std::function<double(const Vec&)>;

/// Tensor-product composite Gauss-Legendre over the box with nested
/// refinement (panels double per level); error estimate is the last
/// refinement difference. n <= 4.
IntegrationResult integrate_box(const Integrand& g, const Box& box,
                                const IntegrationSpec& spec = {});

struct Sampler {
    std::function<Vec(Rng&)> sample;
    std::function<double(const Vec&)> density;
};

Sampler uniform_sampler(const Box& box);
Sampler gaussian_sampler(const Vec& mean, const Mat& covariance);

/// Importance-sampled Monte Carlo mean of g with standard-error estimate.
/// Deterministic for a fixed spec.seed.
IntegrationResult integrate_mc(const Integrand& g, const Sampler& sampler,
                               const IntegrationSpec& spec);

using SphereIntegrand = std::function<double(const Vec&)>;  // argument on S^{n-1}

/// Product-angle rule over the unit sphere S^{n-1}, n in {2,3,4}; the error
/// estimate compares two refinement levels.
IntegrationResult integrate_sphere(const SphereIntegrand& h, int n,
                                   const IntegrationSpec& spec = {});

}  // namespace fasa
