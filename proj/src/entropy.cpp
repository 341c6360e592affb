#include "fasa/entropy.hpp"

#include <cmath>
#include <numbers>

namespace fasa {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

IntegrationResult LogConcaveMeasure::expect(const Integrand& g) const {
    auto integrand = [this, &g](const Vec& x) {
        double v = psi.eval(x);
        if (!std::isfinite(v)) return 0.0;
        return g(x) * std::exp(-v) / Z;
    };
    return integrate_box(integrand, psi.bounding_box, spec);
}

LogConcaveMeasure LogConcaveMeasure::make(const ConvexFunctionOracle& psi_in,
                                          const IntegrationSpec& spec_in) {
    LogConcaveMeasure mu;
    mu.psi = psi_in;
    mu.spec = spec_in;
    auto mass = [&psi_in](const Vec& x) {
        double v = psi_in.eval(x);
        return std::isfinite(v) ? std::exp(-v) : 0.0;
    };
    IntegrationResult zr = integrate_box(mass, psi_in.bounding_box, spec_in);
    mu.Z = zr.value;
    mu.Z_error = zr.error_estimate;
    const int n = psi_in.dim;
    mu.barycenter = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        auto gi = [&psi_in, i](const Vec& x) {
            double v = psi_in.eval(x);
            return std::isfinite(v) ? x(i) * std::exp(-v) : 0.0;
        };
        mu.barycenter(i) = integrate_box(gi, psi_in.bounding_box, spec_in).value / mu.Z;
    }
    mu.second_moment = mu.expect([](const Vec& x) { return x.squaredNorm(); }).value;
    return mu;
}

LogConcaveMeasure LogConcaveMeasure::standard_gaussian(int n, const IntegrationSpec& spec) {
    QuadraticForm q = QuadraticForm::isotropic(n);
    q.offset = 0.5 * n * std::log(kTwoPi);
    return make(q.oracle(), spec);
}

LogConcaveMeasure LogConcaveMeasure::centered() const {
    return make(translate(psi, barycenter), spec);
}

double shannon_entropy(const LogConcaveMeasure& mu) {
    double log_z = std::log(mu.Z);
    auto integrand = [&mu](const Vec& x) {
        double v = mu.psi.eval(x);
        if (!std::isfinite(v)) return 0.0;
        return v * std::exp(-v) / mu.Z;
    };
    double e_psi = integrate_box(integrand, mu.psi.bounding_box, mu.spec).value;
    return e_psi + log_z;
}

double gaussian_entropy(int n) {
    return 0.5 * n * std::log(kTwoPi * std::numbers::e);
}

EntropyFisher relative_entropy_and_fisher(const LogConcaveMeasure& mu) {
    EntropyFisher out;
    const int n = mu.dim();
    double s = shannon_entropy(mu);
    out.moment_gap = mu.second_moment - n;
    out.relative_entropy = -s + 0.5 * n * std::log(kTwoPi) + 0.5 * mu.second_moment;
    out.fisher_information =
        mu.expect([&mu](const Vec& x) { return (x - mu.psi.gradient(x)).squaredNorm(); })
            .value;
    return out;
}

LogSobolevReport logsob_improved_check(const LogConcaveMeasure& mu) {
    LogSobolevReport rep;
    rep.hic = relative_entropy_and_fisher(mu);
    const int n = mu.dim();
    double i = rep.hic.fisher_information, c = rep.hic.moment_gap;
    rep.improved_rhs = 0.5 * c + 0.5 * n * std::log1p((i - c) / n);
    rep.weak_rhs = 0.5 * i;
    rep.improved_margin = rep.improved_rhs - rep.hic.relative_entropy;
    rep.weak_margin = rep.weak_rhs - rep.hic.relative_entropy;
    return rep;
}

ReverseLogSobolevReport reverse_logsob_check(const LogConcaveMeasure& mu_in, double det_tol) {
    ReverseLogSobolevReport rep;
    LogConcaveMeasure mu = mu_in.centered();
    const int n = mu.dim();

    auto log_det_integrand = [&mu, det_tol](const Vec& x) {
        double v = mu.psi.eval(x);
        if (!std::isfinite(v)) return 0.0;
        Mat H;
        try {
            H = mu.psi.hessian(x);
        } catch (const Error&) {
            return 0.0;
        }
        if (!H.allFinite()) return 0.0;
        double det = H.determinant();
        if (det < det_tol) return 0.0;  // complement accounted separately
        return std::log(det) * std::exp(-v) / mu.Z;
    };
    IntegrationResult lhs = integrate_box(log_det_integrand, mu.psi.bounding_box, mu.spec);

    auto irregular = [&mu, det_tol](const Vec& x) {
        double v = mu.psi.eval(x);
        if (!std::isfinite(v)) return 0.0;
        return in_regular_set(mu.psi, x, det_tol) ? 0.0 : std::exp(-v) / mu.Z;
    };
    rep.irregular_mass = integrate_box(irregular, mu.psi.bounding_box, mu.spec).value;

    double s_mu = shannon_entropy(mu);
    rep.rhs = 2.0 * (gaussian_entropy(n) - s_mu);
    if (rep.irregular_mass > 0.01) {
        rep.flagged = true;
        rep.lhs = -kInf;
        rep.margin = kInf;
    } else {
        rep.lhs = lhs.value;
        rep.margin = rep.rhs - rep.lhs;
    }
    rep.combined_error = lhs.error_estimate + 2.0 * mu.Z_error / mu.Z;

    rep.boundary_value =
        mu.expect([&mu](const Vec& x) { return x.dot(mu.psi.gradient(x)); }).value;
    return rep;
}

}  // namespace fasa
