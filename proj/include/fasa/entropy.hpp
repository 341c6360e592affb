#pragma once

#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"

namespace fasa {

/// Normalized log-concave measure e^{-psi}/Z with cached moments. The
/// standard Gaussian arises from psi = |x|^2/2 + (n/2) log(2 pi).
struct LogConcaveMeasure {
    ConvexFunctionOracle psi;     // unnormalized potential
    double Z = 1.0;               // integral of e^{-psi}
    double Z_error = 0.0;
    Vec barycenter;
    double second_moment = 0.0;   // integral of |x|^2 dmu
    IntegrationSpec spec;

    int dim() const { return psi.dim; }
    double density(const Vec& x) const {
        double v = psi.eval(x);
        return std::isfinite(v) ? std::exp(-v) / Z : 0.0;
    }
    /// Potential of the normalized density, psi + log Z.
    double normalized_potential(const Vec& x) const { return psi.eval(x) + std::log(Z); }

    /// Expectation of g under the measure.
    IntegrationResult expect(const Integrand& g) const;

    static LogConcaveMeasure make(const ConvexFunctionOracle& psi,
                                  const IntegrationSpec& spec = {});
    static LogConcaveMeasure standard_gaussian(int n, const IntegrationSpec& spec = {});

    /// Measure translated so its barycenter sits at the origin (one exact step).
    LogConcaveMeasure centered() const;
};

/// Shannon entropy S(mu) = -int log(dmu/dx) dmu = int (psi + log Z) dmu.
double shannon_entropy(const LogConcaveMeasure& mu);

/// Entropy of the standard Gaussian, (n/2) log(2 pi e).
double gaussian_entropy(int n);

struct EntropyFisher {
    double relative_entropy = 0.0;   // H(mu | gamma_n)
    double fisher_information = 0.0; // I(mu | gamma_n) = int |x - grad psi|^2 dmu
    double moment_gap = 0.0;         // C(mu) = int |x|^2 dmu - n
};

EntropyFisher relative_entropy_and_fisher(const LogConcaveMeasure& mu);

struct LogSobolevReport {
    EntropyFisher hic;
    double improved_rhs = 0.0;  // C/2 + (n/2) log(1 + (I - C)/n)
    double weak_rhs = 0.0;      // I/2
    double improved_margin = 0.0;
    double weak_margin = 0.0;
};

/// H <= C/2 + (n/2) log(1 + (I-C)/n) and the weaker H <= I/2.
LogSobolevReport logsob_improved_check(const LogConcaveMeasure& mu);

struct ReverseLogSobolevReport {
    double lhs = 0.0;             // int log det hess psi dmu over X_psi
    double rhs = 0.0;             // 2 (S(gamma_n) - S(mu))
    double margin = 0.0;          // rhs - lhs
    double combined_error = 0.0;
    double boundary_value = 0.0;  // int <x, grad psi> dmu after centering
    double irregular_mass = 0.0;  // mu-mass of the complement of X_psi
    bool flagged = false;         // irregular mass above 1%: lhs reported as -inf
};

/// Concavity-side counterpart of the log-Sobolev inequality, with the
/// Gauss-Green boundary bound int <x, grad psi> dmu <= n checked after
/// centering.
ReverseLogSobolevReport reverse_logsob_check(const LogConcaveMeasure& mu,
                                             double det_tol = kDetTolDefault);

}  // namespace fasa
