#include "fasa/sconcave.hpp"

#include <cmath>
#include <numbers>

namespace fasa {

namespace {

constexpr double kSupportMargin = 1e-12;

double pos(double t) { return t > 0.0 ? t : 0.0; }

}  // namespace

bool SConcaveFunction::in_support(const Vec& x) const {
    if (data) return data->q.value(x) < 1.0 / s - kSupportMargin;
    return profile(x) > 0.0;
}

double SConcaveFunction::psi_value(const Vec& x) const {
    if (data) {
        double qv = data->q.value(x);
        if (qv >= 1.0 / s - kSupportMargin) return kInf;
        double fs_pow = std::pow(data->scale, s) * std::pow(1.0 - s * qv, data->alpha);
        return (1.0 - fs_pow) / s;
    }
    double fv = profile(x);
    if (fv <= 0.0) return kInf;
    return (1.0 - std::pow(fv, s)) / s;
}

Vec SConcaveFunction::psi_gradient(const Vec& x) const {
    if (data) {
        double qv = data->q.value(x);
        double w = 1.0 - s * qv;
        double cs = std::pow(data->scale, s);
        return cs * data->alpha * std::pow(w, data->alpha - 1.0) * data->q.gradient(x);
    }
    return fd_gradient(psi_oracle(), x);
}

Mat SConcaveFunction::psi_hessian(const Vec& x) const {
    if (data) {
        double qv = data->q.value(x);
        double w = 1.0 - s * qv;
        double cs = std::pow(data->scale, s);
        Vec gq = data->q.gradient(x);
        return cs * data->alpha * std::pow(w, data->alpha - 2.0) *
               (w * data->q.A + s * (1.0 - data->alpha) * gq * gq.transpose());
    }
    return fd_hessian(psi_oracle(), x);
}

ConvexFunctionOracle SConcaveFunction::psi_oracle() const {
    ConvexFunctionOracle out;
    out.dim = dim;
    SConcaveFunction fs = *this;
    out.eval = [fs](const Vec& x) { return fs.psi_value(x); };
    if (data) {
        out.grad = [fs](const Vec& x) { return fs.psi_gradient(x); };
        out.hess = [fs](const Vec& x) { return fs.psi_hessian(x); };
        out.domain = [fs](const Vec& x) {
            return fs.in_support(x) ? DomainLocation::interior : DomainLocation::outside;
        };
    }
    out.bounding_box = support_box;
    return out;
}

QuadraticForm SConcaveFunction::dual_support_quadratic() const {
    if (!data) throw UnsupportedS("dual support requires the analytic profile family");
    // (1/s) polar of {q < 1/s} is again an ellipsoid, with matrix 4 Q^-1.
    return QuadraticForm(4.0 * data->q.A.inverse(), Vec::Zero(dim), 0.0);
}

Box SConcaveFunction::dual_support_box() const {
    QuadraticForm qd = dual_support_quadratic();
    Mat Qinv = qd.A.inverse();
    Vec half(dim);
    for (int i = 0; i < dim; ++i) half(i) = std::sqrt(2.0 / s * Qinv(i, i)) * 1.0001;
    return {-half, half};
}

SConcaveFunction SConcaveFunction::profile_family(double s, double alpha, QuadraticForm q,
                                                  double scale) {
    SConcaveFunction fs;
    fs.s = s;
    fs.dim = q.dim();
    fs.smooth = true;
    SProfileData d{alpha, q, scale};
    fs.data = d;
    double alpha_over_s = alpha / s;
    fs.profile = [s, alpha_over_s, q, scale](const Vec& x) {
        double w = 1.0 - s * q.value(x);
        if (w <= 0.0) return 0.0;
        return scale * std::pow(w, alpha_over_s);
    };
    Mat Qinv = q.A.inverse();
    Vec half(fs.dim);
    for (int i = 0; i < fs.dim; ++i) half(i) = std::sqrt(2.0 / s * Qinv(i, i)) * 1.0001;
    fs.support_box = {-half, half};
    return fs;
}

SConcaveFunction SConcaveFunction::equality_family(double s, const Mat& A) {
    const int n = static_cast<int>(A.rows());
    double c0 = std::pow(std::numbers::pi / s, -0.5 * n) *
                std::tgamma(1.0 + 0.5 * n + 0.5 / s) / std::tgamma(1.0 + 0.5 / s);
    c0 *= std::abs(A.determinant());
    QuadraticForm q(2.0 * A.transpose() * A, Vec::Zero(n), 0.0);
    return profile_family(s, 0.5, q, c0);
}

SConcaveFunction SConcaveFunction::indicator_ball(double s, int n) {
    SConcaveFunction fs;
    fs.s = s;
    fs.dim = n;
    fs.smooth = false;
    fs.profile = [](const Vec& x) { return x.norm() < 1.0 ? 1.0 : 0.0; };
    fs.support_box = Box::cube(n, 1.0);
    return fs;
}

namespace {

// Integral of g over the support ellipsoid {q < 1/s} through x = L sin(t) w,
// |w| = 1, which turns the boundary weight 1 - s q into cos^2(t) and removes
// the algebraic endpoint singularities. Refinement doubles the angular
// resolution; the error estimate is the last difference.
IntegrationResult integrate_support(const SConcaveFunction& fs, const Integrand& g,
                                    const IntegrationSpec& spec) {
    if (!fs.data) {
        auto masked = [&fs, &g](const Vec& x) { return fs.in_support(x) ? g(x) : 0.0; };
        return integrate_box(masked, fs.support_box, spec);
    }
    const int n = fs.dim;
    const QuadraticForm& q = fs.data->q;
    Eigen::SelfAdjointEigenSolver<Mat> es(q.A);
    Mat Qroot_inv = es.operatorInverseSqrt();
    Mat L = std::sqrt(2.0 / fs.s) * Qroot_inv;
    double detL = std::abs(L.determinant());

    static const double gn[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

    auto pass = [&](long theta_panels, long azimuth, long& evals) -> double {
        std::vector<double> tn, tw;
        double width = 0.5 * std::numbers::pi / static_cast<double>(theta_panels);
        for (long p = 0; p < theta_panels; ++p) {
            double a = p * width, mid = a + 0.5 * width, half = 0.5 * width;
            for (int k = 3; k >= 0; --k) {
                tn.push_back(mid - half * gn[k]);
                tw.push_back(half * gw[k]);
            }
            for (int k = 0; k < 4; ++k) {
                tn.push_back(mid + half * gn[k]);
                tw.push_back(half * gw[k]);
            }
        }
        double sum = 0.0;
        if (n == 1) {
            for (double w : {-1.0, 1.0}) {
                for (size_t i = 0; i < tn.size(); ++i) {
                    double st = std::sin(tn[i]);
                    Vec x = L * vec1(st * w);
                    double v = g(x);
                    ++evals;
                    if (std::isnan(v)) throw NonFiniteIntegrand();
                    if (!std::isinf(v)) sum += tw[i] * std::cos(tn[i]) * v;
                }
            }
        } else if (n == 2) {
            const double two_pi = 2.0 * std::numbers::pi;
            for (long j = 0; j < azimuth; ++j) {
                double phi = two_pi * (static_cast<double>(j) + 0.5) /
                             static_cast<double>(azimuth);
                Vec w = vec2(std::cos(phi), std::sin(phi));
                for (size_t i = 0; i < tn.size(); ++i) {
                    double st = std::sin(tn[i]);
                    Vec x = L * (st * w);
                    double v = g(x);
                    ++evals;
                    if (std::isnan(v)) throw NonFiniteIntegrand();
                    if (!std::isinf(v))
                        sum += tw[i] * std::cos(tn[i]) * st * v * two_pi /
                               static_cast<double>(azimuth);
                }
            }
        } else {
            throw UnsupportedDimension("support-adapted rule covers n <= 2");
        }
        return detL * sum;
    };

    IntegrationResult res;
    res.method = Method::lattice;
    long panels = 2, azimuth = 16;
    double prev = pass(panels, azimuth, res.evals);
    for (;;) {
        panels *= 2;
        azimuth *= 2;
        long cost = (n == 1 ? 2 : azimuth) * 8 * panels;
        if (res.evals + cost > spec.budget) {
            res.value = prev;
            break;
        }
        double cur = pass(panels, azimuth, res.evals);
        res.value = cur;
        res.error_estimate = std::abs(cur - prev);
        if (res.error_estimate <= spec.rel_tol * std::max(std::abs(cur), 1e-300)) {
            res.converged = true;
            break;
        }
        prev = cur;
    }
    return res;
}

// Projected-ascent maximizer for R(x) = (<x,y> - psi)/(1 - s psi) over the
// support, with coarse grid seeding and optional warm start.
SStarValue maximize_ratio(const SConcaveFunction& fs, const Vec& y, const Vec* warm,
                          const SolverOptions& opts) {
    const int n = fs.dim;
    auto ratio = [&fs, &y](const Vec& x) -> double {
        double psi = fs.psi_value(x);
        if (!std::isfinite(psi)) return -kInf;
        double d = 1.0 - fs.s * psi;
        if (d <= 0.0) return -kInf;
        return (x.dot(y) - psi) / d;
    };
    auto ratio_grad = [&fs, &y](const Vec& x) -> Vec {
        double psi = fs.psi_value(x);
        Vec gp = fs.psi_gradient(x);
        double num = x.dot(y) - psi;
        double den = 1.0 - fs.s * psi;
        return (y - gp) / den + fs.s * num * gp / (den * den);
    };

    Vec best = Vec::Zero(n);
    double fbest = ratio(best);
    long grid = n == 1 ? 65 : 17;
    std::vector<long> idx(n, 0);
    Vec x(n);
    for (;;) {
        for (int i = 0; i < n; ++i)
            x(i) = fs.support_box.lo(i) + (fs.support_box.hi(i) - fs.support_box.lo(i)) *
                                              static_cast<double>(idx[i]) /
                                              static_cast<double>(grid - 1);
        double v = ratio(x);
        if (v > fbest) {
            fbest = v;
            best = x;
        }
        int d = n - 1;
        while (d >= 0) {
            if (++idx[d] < grid) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    if (warm) {
        double v = ratio(*warm);
        if (v > fbest) {
            fbest = v;
            best = *warm;
        }
    }
    if (!std::isfinite(fbest)) throw EmptySupport("no feasible point in the support");

    double step = 0.25;
    for (int it = 0; it < opts.max_iters; ++it) {
        Vec g = ratio_grad(best);
        double gn2 = g.norm();
        if (gn2 < 1e-14) break;
        double t = step;
        bool improved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec xn = best + t * g;
            double fn = ratio(xn);
            if (std::isfinite(fn) && fn > fbest + 1e-16) {
                double gain = fn - fbest;
                best = xn;
                fbest = fn;
                step = std::min(2.0 * t, 1e3);
                improved = true;
                if (gain < opts.tol * (1.0 + std::abs(fbest))) it = opts.max_iters;
                break;
            }
            t *= 0.5;
            if (t < 1e-16) break;
        }
        if (!improved) break;
    }
    return {fbest, best};
}

}  // namespace

IntegrationResult s_mass(const SConcaveFunction& fs, const IntegrationSpec& spec) {
    auto g = [&fs](const Vec& x) { return fs.f(x); };
    return integrate_support(fs, g, spec);
}

SConcaveFunction s_normalized(const SConcaveFunction& fs, const IntegrationSpec& spec) {
    double z = s_mass(fs, spec).value;
    if (std::abs(z - 1.0) < 1e-12) return fs;
    if (!fs.data) throw NotNormalized("cannot rescale a profile without fixture data");
    return SConcaveFunction::profile_family(fs.s, fs.data->alpha, fs.data->q,
                                            fs.data->scale / z);
}

SStarValue psi_star_s(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts) {
    if (fs.data) {
        QuadraticForm qd = fs.dual_support_quadratic();
        if (qd.value(y) >= 1.0 / fs.s * (1.0 - 1e-12))
            throw OutsideDualSupport("dual potential diverges here");
    }
    SStarValue v = maximize_ratio(fs, y, nullptr, opts);
    if (v.value > 1e8) throw OutsideDualSupport("dual potential diverges here");
    return v;
}

double s_dual_profile(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts) {
    try {
        double v = psi_star_s(fs, y, opts).value;
        return std::pow(pos(1.0 - fs.s * v), 1.0 / fs.s);
    } catch (const OutsideDualSupport&) {
        return 0.0;
    }
}

double s_dual_at(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts) {
    const int n = fs.dim;
    auto obj = [&fs, &y](const Vec& x) -> double {
        double fv = fs.f(x);
        if (fv <= 0.0) return kInf;
        return std::pow(pos(1.0 - fs.s * x.dot(y)), 1.0 / fs.s) / fv;
    };
    Vec best;
    double fbest = kInf;
    long grid = n == 1 ? 129 : 33;
    std::vector<long> idx(n, 0);
    Vec x(n);
    for (;;) {
        for (int i = 0; i < n; ++i)
            x(i) = fs.support_box.lo(i) + (fs.support_box.hi(i) - fs.support_box.lo(i)) *
                                              static_cast<double>(idx[i]) /
                                              static_cast<double>(grid - 1);
        double v = obj(x);
        if (v < fbest) {
            fbest = v;
            best = x;
        }
        int d = n - 1;
        while (d >= 0) {
            if (++idx[d] < grid) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    if (!std::isfinite(fbest) && fbest > 0) {
        // No grid point hit the support.
        if (!fs.in_support(Vec::Zero(n))) throw EmptySupport();
        best = Vec::Zero(n);
        fbest = obj(best);
    }
    if (fbest <= 0.0) return 0.0;

    // Compass refinement; the objective may be non-smooth at the positive-part
    // boundary, so derivative-free polish is the robust choice.
    double step = (fs.support_box.hi - fs.support_box.lo).maxCoeff() / (grid - 1.0);
    for (int it = 0; it < opts.max_iters && step > 1e-10; ++it) {
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec xt = best;
                xt(i) += sgn * step;
                double ft = obj(xt);
                if (ft < fbest - 1e-18) {
                    best = xt;
                    fbest = ft;
                    moved = true;
                }
            }
        }
        if (!moved) step *= 0.5;
    }
    return fbest;
}

double implicit_relation_residual(const SConcaveFunction& fs, const Vec& y,
                                  const SolverOptions& opts) {
    double star_s = psi_star_s(fs, y, opts).value;
    double w = 1.0 - fs.s * star_s;
    ConvexFunctionOracle psi = fs.psi_oracle();
    double classical = legendre_at(psi, y / w, opts).value;
    return std::abs(w * (1.0 + fs.s * classical) - 1.0);
}

TMapValue t_map(const SConcaveFunction& fs, const Vec& x, double det_tol) {
    if (!fs.in_support(x)) throw IrregularPoint("point outside the support");
    double psi = fs.psi_value(x);
    Vec g = fs.psi_gradient(x);
    Mat H = fs.psi_hessian(x);
    double det = H.determinant();
    if (!(det >= det_tol)) throw IrregularPoint("Hessian not invertible here");
    double den = 1.0 + fs.s * (g.dot(x) - psi);
    TMapValue out;
    out.y = g / den;
    out.jacobian = (1.0 - fs.s * psi) * det / std::pow(den, fs.dim + 1);
    return out;
}

Vec t_map_dual(const SConcaveFunction& fs, const Vec& y, const SolverOptions& opts) {
    SStarValue sv = psi_star_s(fs, y, opts);
    double psi_x = fs.psi_value(sv.argmax);
    Vec grad_star = sv.argmax / (1.0 - fs.s * psi_x);
    double den = 1.0 + fs.s * (grad_star.dot(y) - sv.value);
    return grad_star / den;
}

namespace {

double s_area_integrand(double s, int n, double lambda, double w1, double det,
                        double den) {
    double inv_s = 1.0 / s;
    return std::pow(w1, (inv_s - 1.0) * (1.0 - lambda)) * std::pow(det, lambda) /
           std::pow(den, lambda * (n + inv_s + 1.0) - 1.0) / (1.0 + n * s);
}

}  // namespace

IntegrationResult as_lambda_s(double lambda, const SConcaveFunction& fs,
                              const IntegrationSpec& spec, double det_tol) {
    const int n = fs.dim;
    auto g = [&fs, lambda, n, det_tol](const Vec& x) -> double {
        if (!fs.in_support(x)) return 0.0;
        double psi = fs.psi_value(x);
        Vec gp = fs.psi_gradient(x);
        Mat H = fs.psi_hessian(x);
        if (!H.allFinite()) return 0.0;
        double det = H.determinant();
        if (lambda <= 0.0) {
            if (det < det_tol) return 0.0;
        } else if (det <= 0.0) {
            return 0.0;
        }
        double w1 = 1.0 - fs.s * psi;
        double den = 1.0 + fs.s * (gp.dot(x) - psi);
        double v = s_area_integrand(fs.s, n, lambda, w1, det, den);
        if (std::isnan(v)) throw NonFiniteIntegrand("s-concave integrand is NaN");
        return v;
    };
    return integrate_support(fs, g, spec);
}

namespace {

// Pointwise dual-side data built from the inner optimization: the value is
// the solved supremum, the gradient comes from the maximizer, the Hessian
// from central differences of the gradient. A warm-started cache keeps the
// per-node cost low along the integration sweep.
struct DualView {
    SConcaveFunction fs;
    SolverOptions opts;
    mutable bool warm = false;
    mutable Vec warm_x;

    SStarValue solve(const Vec& y) const {
        if (fs.data) {
            QuadraticForm qd = fs.dual_support_quadratic();
            if (qd.value(y) >= 1.0 / fs.s * (1.0 - 1e-12))
                throw OutsideDualSupport("dual potential diverges here");
        }
        SStarValue v = maximize_ratio(fs, y, warm ? &warm_x : nullptr, opts);
        warm = true;
        warm_x = v.argmax;
        return v;
    }
    double value(const Vec& y) const { return solve(y).value; }
    Vec grad(const Vec& y) const {
        SStarValue sv = solve(y);
        return sv.argmax / (1.0 - fs.s * fs.psi_value(sv.argmax));
    }
    Mat hess(const Vec& y) const {
        const int n = fs.dim;
        double h = 1e-5 * (1.0 + y.norm());
        Mat H(n, n);
        for (int j = 0; j < n; ++j) {
            Vec yp = y, ym = y;
            yp(j) += h;
            ym(j) -= h;
            Vec gp = grad(yp), gm = grad(ym);
            H.col(j) = (gp - gm) / (2.0 * h);
        }
        return 0.5 * (H + H.transpose());
    }
};

}  // namespace

IntegrationResult as_lambda_s_dual(double lambda, const SConcaveFunction& fs,
                                   const IntegrationSpec& spec, double det_tol) {
    if (!fs.data) throw UnsupportedS("dual-side integral requires the profile family");
    const int n = fs.dim;
    auto view = std::make_shared<DualView>();
    view->fs = fs;

    // Dual support is the ellipsoid {q_dual < 1/s}; reuse the same
    // boundary-flattening substitution with a shrink to stay strictly inside.
    SConcaveFunction dual_shape =
        SConcaveFunction::profile_family(fs.s, 1.0, fs.dual_support_quadratic(), 1.0);

    auto g = [view, lambda, n, det_tol](const Vec& y) -> double {
        double vstar, w1, den, det;
        try {
            SStarValue sv = view->solve(y);
            vstar = sv.value;
            double psi_x = view->fs.psi_value(sv.argmax);
            Vec grad_star = sv.argmax / (1.0 - view->fs.s * psi_x);
            Mat H = view->hess(y);
            det = H.determinant();
            w1 = 1.0 - view->fs.s * vstar;
            den = 1.0 + view->fs.s * (grad_star.dot(y) - vstar);
        } catch (const OutsideDualSupport&) {
            return 0.0;
        }
        if (w1 <= 0.0 || den <= 0.0) return 0.0;
        if (lambda <= 0.0) {
            if (det < det_tol) return 0.0;
        } else if (det <= 0.0) {
            return 0.0;
        }
        double v = s_area_integrand(view->fs.s, n, lambda, w1, det, den);
        return std::isnan(v) ? 0.0 : v;
    };
    return integrate_support(dual_shape, g, spec);
}

SDualityReport duality_s_check(double lambda, const SConcaveFunction& fs,
                               const IntegrationSpec& spec) {
    SDualityReport rep;
    IntegrationResult primal = as_lambda_s(lambda, fs, spec);
    IntegrationResult dual = as_lambda_s_dual(1.0 - lambda, fs, spec);
    rep.primal = primal.value;
    rep.dual = dual.value;
    rep.combined_error = primal.error_estimate + dual.error_estimate;
    double scale = std::max({std::abs(rep.primal), std::abs(rep.dual), 1e-300});
    rep.residual = std::abs(rep.primal - rep.dual) / scale;
    return rep;
}

namespace {

IntegrationResult dual_mass(const SConcaveFunction& fs, const IntegrationSpec& spec) {
    auto view = std::make_shared<DualView>();
    view->fs = fs;
    SConcaveFunction dual_shape =
        SConcaveFunction::profile_family(fs.s, 1.0, fs.dual_support_quadratic(), 1.0);
    auto g = [view](const Vec& y) -> double {
        try {
            double v = view->value(y);
            return std::pow(pos(1.0 - view->fs.s * v), 1.0 / view->fs.s);
        } catch (const OutsideDualSupport&) {
            return 0.0;
        }
    };
    return integrate_support(dual_shape, g, spec);
}

}  // namespace

SHolderReport holder_s_check(double lambda, const SConcaveFunction& fs,
                             const IntegrationSpec& spec) {
    SHolderReport rep;
    IntegrationResult as_r = as_lambda_s(lambda, fs, spec);
    IntegrationResult mass = s_mass(fs, spec);
    IntegrationResult dmass = dual_mass(fs, spec);
    rep.as_value = as_r.value;
    rep.mass = mass.value;
    rep.dual_mass = dmass.value;
    rep.bound = std::pow(mass.value, 1.0 - lambda) * std::pow(dmass.value, lambda);
    rep.reversed = lambda < 0.0 || lambda > 1.0;
    rep.margin = rep.reversed ? rep.as_value - rep.bound : rep.bound - rep.as_value;
    rep.combined_error = as_r.error_estimate + mass.error_estimate + dmass.error_estimate;
    return rep;
}

double s_santalo_bound(int n, double s) {
    double g1 = std::tgamma(1.0 + 0.5 / s);
    double g2 = std::tgamma(1.0 + 0.5 * n + 0.5 / s);
    return std::pow(std::numbers::pi / s, n) * (g1 / g2) * (g1 / g2);
}

SLogSobReport s_logsob_check(const SConcaveFunction& fs_in, const IntegrationSpec& spec) {
    const int n = fs_in.dim;
    const double s = fs_in.s;

    // Evenness probe.
    {
        Rng rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 64; ++k) {
            Vec x(n);
            for (int i = 0; i < n; ++i)
                x(i) = u(rng) * 0.9 * fs_in.support_box.hi(i);
            if (std::abs(fs_in.f(x) - fs_in.f(-x)) > 1e-9 * (1.0 + fs_in.f(x)))
                throw NotEven("profile is not even");
        }
    }
    SConcaveFunction fs = s_normalized(fs_in, spec);

    auto density = [&fs, n, s](const Vec& x) -> double {
        double psi = fs.psi_value(x);
        Vec g = fs.psi_gradient(x);
        double w1 = 1.0 - s * psi;
        double den = 1.0 + s * (g.dot(x) - psi);
        return std::pow(w1, 1.0 / s - 1.0) * den / (1.0 + n * s);
    };

    SLogSobReport rep;
    IntegrationResult mass = integrate_support(fs, density, spec);
    rep.mass = mass.value;

    auto lhs_int = [&fs, &density](const Vec& x) -> double {
        Mat H = fs.psi_hessian(x);
        double det = H.determinant();
        if (det <= 0.0) return 0.0;
        return std::log(det) * density(x);
    };
    IntegrationResult lhs = integrate_support(fs, lhs_int, spec);
    rep.lhs = lhs.value;

    auto den_int = [&fs, &density, s](const Vec& x) -> double {
        double psi = fs.psi_value(x);
        Vec g = fs.psi_gradient(x);
        double den = 1.0 + s * (g.dot(x) - psi);
        return std::log(den) * density(x);
    };
    IntegrationResult t1 = integrate_support(fs, den_int, spec);

    auto ent_int = [&density](const Vec& x) -> double {
        double d = density(x);
        if (d <= 0.0) return 0.0;
        return -std::log(d) * d;
    };
    IntegrationResult ent = integrate_support(fs, ent_int, spec);
    rep.entropy = ent.value;

    double constant = std::log(s_santalo_bound(n, s) * (1.0 + n * s));
    rep.rhs = (1.0 / s + n) * t1.value - rep.entropy + constant;
    rep.margin = rep.rhs - rep.lhs;
    rep.combined_error =
        lhs.error_estimate + (1.0 / s + n) * t1.error_estimate + ent.error_estimate;

    IntegrationResult fmass = s_mass(fs, spec);
    IntegrationResult fdual = dual_mass(fs, spec);
    rep.santalo_product = fmass.value * fdual.value;
    rep.santalo_bound = s_santalo_bound(n, s);
    rep.santalo_margin = rep.santalo_bound - rep.santalo_product;
    return rep;
}

ConvexBody lift_body(const SConcaveFunction& fs) {
    double k_real = 1.0 / fs.s;
    int k = static_cast<int>(std::lround(k_real));
    if (std::abs(k_real - k) > 1e-9 || k < 1)
        throw UnsupportedS("lift requires s = 1/k with integer k");
    const int n = fs.dim;
    const int total = n + k;
    if (total > 3) throw UnsupportedS("lifted dimension capped at 3");

    double sqrt_s = std::sqrt(fs.s);
    SConcaveFunction prof = fs;
    auto f_pow_s = [prof](const Vec& x) {
        double v = prof.f(x);
        return v <= 0.0 ? 0.0 : std::pow(v, prof.s);
    };

    auto radial = [prof, f_pow_s, sqrt_s, n, k](const Vec& u) -> double {
        Vec ux = u.head(n);
        Vec uy = u.tail(k);
        double ynorm = uy.norm();
        auto height = [&](double t) { return f_pow_s((t / sqrt_s) * ux); };
        if (ynorm < 1e-14) {
            // Root of the support indicator along the x-axis.
            double t_in = 0.0, t_out = 1e-3;
            while (height(t_out) > 0.0 && t_out < 1e9) {
                t_in = t_out;
                t_out *= 2.0;
            }
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (t_in + t_out);
                if (height(mid) > 0.0)
                    t_in = mid;
                else
                    t_out = mid;
            }
            return 0.5 * (t_in + t_out);
        }
        auto inside = [&](double t) { return height(t) - t * ynorm; };
        double t_in = 0.0, t_out = 1e-3;
        while (inside(t_out) > 0.0 && t_out < 1e9) {
            t_in = t_out;
            t_out *= 2.0;
        }
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (t_in + t_out);
            if (inside(mid) > 0.0)
                t_in = mid;
            else
                t_out = mid;
        }
        return 0.5 * (t_in + t_out);
    };

    ConvexBody body;
    body.dim = total;
    body.kind = "lift";
    body.gauge = [radial](const Vec& x) -> double {
        double norm = x.norm();
        if (norm < 1e-300) return 0.0;
        return norm / radial(x / norm);
    };
    auto gauge = body.gauge;
    body.support = [gauge, total](const Vec& y) -> double {
        // Coarse boundary scan; adequate for diagnostics only.
        Rng rng(11);
        double best = 0.0;
        for (int it = 0; it < 2048; ++it) {
            Vec u = random_unit(total, rng);
            double g = gauge(u);
            if (g <= 0.0) continue;
            best = std::max(best, (u / g).dot(y));
        }
        return best;
    };
    body.smooth_positive_curvature = false;
    return body;
}

LiftReport lift_body_check(const SConcaveFunction& fs, double lambda,
                           const IntegrationSpec& spec) {
    const int n = fs.dim;
    double k_real = 1.0 / fs.s;
    int k = static_cast<int>(std::lround(k_real));
    ConvexBody body = lift_body(fs);

    LiftReport rep;
    rep.p = (n + k_real) * lambda / (1.0 - lambda);
    IntegrationResult functional = as_lambda_s(lambda, fs, spec);
    IntegrationResult body_side = as_p_body(body, rep.p, spec);
    double denom = std::pow(fs.s, 0.5 * n) * sphere_surface(k);
    rep.lhs = (1.0 + n * fs.s) * functional.value;
    rep.rhs = body_side.value / denom;
    rep.combined_error =
        (1.0 + n * fs.s) * functional.error_estimate + body_side.error_estimate / denom;
    double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
    rep.residual = std::abs(rep.lhs - rep.rhs) / scale;
    return rep;
}

}  // namespace fasa
