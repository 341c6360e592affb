#include "fasa/asa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fasa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared integrand for the generalized surface-area integral. lambda <= 0
// restricts to X_psi through the determinant tolerance; lambda > 0 clamps
// nonpositive determinants to zero, matching integration over the domain.
double asa_integrand(const WeightPair& w, double lambda, const ConvexFunctionOracle& psi,
                     double det_tol, const Vec& x) {
    if (psi.locate(x) != DomainLocation::interior) return 0.0;
    double v = psi.eval(x);
    if (!std::isfinite(v)) return 0.0;
    Mat H;
    try {
        H = psi.hessian(x);
    } catch (const Error&) {
        return 0.0;
    }
    if (!H.allFinite()) return 0.0;
    double det = H.determinant();
    if (lambda <= 0.0) {
        if (det < det_tol) return 0.0;
    } else if (det <= 0.0) {
        return 0.0;
    }
    Vec g = psi.gradient(x);
    double dual_arg = x.dot(g) - v;
    double f1 = w.F1(v);
    double f2 = w.F2(dual_arg);
    if (lambda < 0.0 || lambda > 1.0) {
        if (f1 <= 0.0 || f2 <= 0.0) return 0.0;  // positivity side condition
    }
    if (lambda < 0.0 && det < det_tol)
        throw NonFiniteIntegrand("zero determinant inside the declared regular set");
    double val = std::pow(f1, 1.0 - lambda) * std::pow(f2, lambda) * std::pow(det, lambda);
    if (std::isnan(val)) throw NonFiniteIntegrand("surface-area integrand is NaN");
    return val;
}

IntegrationResult integrate_mass(const ConvexFunctionOracle& psi, const IntegrationSpec& spec) {
    auto g = [&psi](const Vec& x) {
        double v = psi.eval(x);
        return std::isfinite(v) ? std::exp(-v) : 0.0;
    };
    return integrate_box(g, psi.bounding_box, spec);
}

Vec barycenter_of(const ConvexFunctionOracle& psi, const IntegrationSpec& spec, double z_mass) {
    const int n = psi.dim;
    Vec b(n);
    for (int i = 0; i < n; ++i) {
        auto gi = [&psi, i](const Vec& x) {
            double v = psi.eval(x);
            return std::isfinite(v) ? x(i) * std::exp(-v) : 0.0;
        };
        b(i) = integrate_box(gi, psi.bounding_box, spec).value / z_mass;
    }
    return b;
}

}  // namespace

double WeightPair::envelope(double t) const {
    if (identical && log_concave && non_increasing) return F1(t);
    // Numeric sup of sqrt(F1(t+u) F2(t-u)) over u; the constraint
    // (t1+t2)/2 >= t binds at equality for non-increasing weights.
    auto val = [this, t](double u) {
        double a = F1(t + u), b = F2(t - u);
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return std::sqrt(a * b);
    };
    double best = 0.0, best_u = 0.0;
    for (int k = 0; k <= 400; ++k) {
        double u = -20.0 + 0.1 * k;
        double v = val(u);
        if (v > best) {
            best = v;
            best_u = u;
        }
    }
    double lo = best_u - 0.1, hi = best_u + 0.1;
    for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (val(m1) < val(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, val(0.5 * (lo + hi)));
}

WeightPair WeightPair::exponential() {
    WeightPair w;
    w.F1 = [](double t) { return std::exp(-t); };
    w.F2 = w.F1;
    w.identical = true;
    w.log_concave = true;
    w.non_increasing = true;
    return w;
}

IntegrationResult as_general(const WeightPair& w, double lambda,
                             const ConvexFunctionOracle& psi, const IntegrationSpec& spec,
                             double det_tol) {
    auto g = [&w, lambda, &psi, det_tol](const Vec& x) {
        return asa_integrand(w, lambda, psi, det_tol, x);
    };
    return integrate_box(g, psi.bounding_box, spec);
}

IntegrationResult as_lambda(double lambda, const ConvexFunctionOracle& psi,
                            const IntegrationSpec& spec, double det_tol) {
    return as_general(WeightPair::exponential(), lambda, psi, spec, det_tol);
}

double as_lambda_quadratic(const QuadraticForm& q, double lambda) {
    const int n = q.dim();
    double det = q.A.determinant();
    double quad = q.center.dot(q.A * q.center);
    return std::pow(kTwoPi, 0.5 * n) * std::pow(det, lambda - 0.5) *
           std::exp((2.0 * lambda - 1.0) * q.offset) *
           std::exp(0.5 * lambda * lambda * quad);
}

DualityReport duality_residual(const WeightPair& w, double lambda,
                               const ConvexFunctionOracle& psi, const IntegrationSpec& spec,
                               const ConvexFunctionOracle* psi_star, double det_tol) {
    WeightPair swapped;
    swapped.F1 = w.F2;
    swapped.F2 = w.F1;
    swapped.identical = w.identical;
    swapped.log_concave = w.log_concave;
    swapped.non_increasing = w.non_increasing;

    IntegrationResult primal = as_general(w, lambda, psi, spec, det_tol);
    ConvexFunctionOracle star_local;
    if (!psi_star) {
        star_local = dual_oracle(psi);
        psi_star = &star_local;
    }
    IntegrationResult dual = as_general(swapped, 1.0 - lambda, *psi_star, spec, det_tol);

    DualityReport rep;
    rep.primal = primal.value;
    rep.dual = dual.value;
    rep.combined_error = primal.error_estimate + dual.error_estimate;
    double scale = std::max({std::abs(primal.value), std::abs(dual.value), 1e-300});
    rep.residual = std::abs(primal.value - dual.value) / scale;
    return rep;
}

ConvexityReport log_convexity_check(const ConvexFunctionOracle& psi,
                                    const std::vector<double>& lambda_grid,
                                    const IntegrationSpec& spec) {
    ConvexityReport rep;
    for (double lam : lambda_grid) {
        IntegrationResult r = as_lambda(lam, psi, spec);
        rep.profile.lambdas.push_back(lam);
        rep.profile.log_values.push_back(std::log(std::max(r.value, 1e-300)));
        rep.profile.log_errors.push_back(r.error_estimate / std::max(r.value, 1e-300));
    }
    const auto& lv = rep.profile.log_values;
    const auto& le = rep.profile.log_errors;
    const int m = static_cast<int>(lv.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; j += 2) {
            int mid = (i + j) / 2;
            // Grid must be uniform for the midpoint to land on a node.
            double lam_mid = 0.5 * (rep.profile.lambdas[i] + rep.profile.lambdas[j]);
            if (std::abs(lam_mid - rep.profile.lambdas[mid]) > 1e-12) continue;
            double excess = lv[mid] - 0.5 * (lv[i] + lv[j]);
            double budget = le[mid] + 0.5 * (le[i] + le[j]) + 1e-7;
            if (excess > budget) rep.violations.push_back({i, j, excess});
        }
    }
    return rep;
}

IsoperimetricReport isoperimetric_check(double lambda, const ConvexFunctionOracle& psi,
                                        const IntegrationSpec& spec) {
    IntegrationResult zr = integrate_mass(psi, spec);
    Vec bary = barycenter_of(psi, spec, zr.value);
    ConvexFunctionOracle centered = translate(psi, bary);

    IntegrationResult as_r = as_lambda(lambda, centered, spec);
    const int n = psi.dim;
    // Mass restricted to X_psi; identical to the full mass on C^2 fixtures.
    auto zx = [&centered](const Vec& x) {
        if (!in_regular_set(centered, x)) return 0.0;
        return std::exp(-centered.eval(x));
    };
    IntegrationResult zxr = integrate_box(zx, centered.bounding_box, spec);

    IsoperimetricReport rep;
    rep.as_value = as_r.value;
    rep.bound = std::pow(kTwoPi, n * lambda) * std::pow(zxr.value, 1.0 - 2.0 * lambda);
    rep.reversed = lambda < 0.0;
    rep.margin = rep.reversed ? rep.as_value - rep.bound : rep.bound - rep.as_value;
    rep.combined_error =
        as_r.error_estimate +
        std::abs(rep.bound) * (1.0 - 2.0 * lambda) * zxr.error_estimate /
            std::max(zxr.value, 1e-300);
    return rep;
}

SantaloReport santalo_product(const ConvexFunctionOracle& psi, const IntegrationSpec& spec,
                              const ConvexFunctionOracle* psi_star,
                              const std::vector<double>& lambdas) {
    IntegrationResult zr = integrate_mass(psi, spec);
    Vec bary = barycenter_of(psi, spec, zr.value);
    ConvexFunctionOracle centered = translate(psi, bary);
    IntegrationResult zc = integrate_mass(centered, spec);

    ConvexFunctionOracle star_local;
    if (!psi_star) {
        star_local = dual_oracle(centered);
        psi_star = &star_local;
    }
    IntegrationResult zd = integrate_mass(*psi_star, spec);

    SantaloReport rep;
    const int n = psi.dim;
    rep.z_primal = zc.value;
    rep.z_dual = zd.value;
    rep.product = zc.value * zd.value;
    rep.bound = std::pow(kTwoPi, n);
    rep.margin = rep.bound - rep.product;
    rep.combined_error = std::abs(zd.value) * zc.error_estimate +
                         std::abs(zc.value) * zd.error_estimate;
    rep.reverse_constant = std::pow(rep.product, 1.0 / n);
    for (double lam : lambdas) {
        IntegrationResult a = as_lambda(lam, centered, spec);
        IntegrationResult b = as_lambda(lam, *psi_star, spec);
        rep.as_lambdas.push_back(lam);
        rep.as_products.push_back(a.value * b.value);
    }
    return rep;
}

Vec santalo_point(const ConvexFunctionOracle& psi, const IntegrationSpec& spec,
                  int max_iters) {
    (void)spec;
    const int n = psi.dim;
    // Even density: the minimizing translation is the origin.
    {
        Rng rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        bool even = true;
        for (int k = 0; k < 32 && even; ++k) {
            Vec x(n);
            for (int i = 0; i < n; ++i)
                x(i) = u(rng) * 0.45 *
                       (psi.bounding_box.hi(i) - psi.bounding_box.lo(i));
            double a = psi.eval(x), b = psi.eval(-x);
            if (std::isfinite(a) != std::isfinite(b)) even = false;
            else if (std::isfinite(a) && std::abs(a - b) > 1e-9 * (1.0 + std::abs(a)))
                even = false;
        }
        if (even) return Vec::Zero(n);
    }

    // Cache conjugate values on a fixed lattice; the translation only
    // reweights them by exp(<z, y>).
    ConvexFunctionOracle star = dual_oracle(psi);
    const Box& box = star.bounding_box;
    long per_axis = n == 1 ? 512 : n == 2 ? 96 : 32;
    std::vector<Vec> nodes;
    std::vector<double> weights, star_vals;
    {
        std::vector<std::vector<double>> ax_nodes(n), ax_weights(n);
        long panels = per_axis / 8;
        for (int i = 0; i < n; ++i) {
            // 8-point Gauss-Legendre panels, matching the lattice engine.
            static const double gn[4] = {0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
            static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
            double w = (box.hi(i) - box.lo(i)) / static_cast<double>(panels);
            for (long p = 0; p < panels; ++p) {
                double a = box.lo(i) + p * w, mid = a + 0.5 * w, half = 0.5 * w;
                for (int k = 3; k >= 0; --k) {
                    ax_nodes[i].push_back(mid - half * gn[k]);
                    ax_weights[i].push_back(half * gw[k]);
                }
                for (int k = 0; k < 4; ++k) {
                    ax_nodes[i].push_back(mid + half * gn[k]);
                    ax_weights[i].push_back(half * gw[k]);
                }
            }
        }
        std::vector<long> idx(n, 0);
        for (;;) {
            Vec y(n);
            double w = 1.0;
            for (int i = 0; i < n; ++i) {
                y(i) = ax_nodes[i][idx[i]];
                w *= ax_weights[i][idx[i]];
            }
            double v = star.eval(y);
            if (std::isfinite(v)) {
                nodes.push_back(y);
                weights.push_back(w);
                star_vals.push_back(v);
            }
            int d = n - 1;
            while (d >= 0) {
                if (++idx[d] < static_cast<long>(ax_nodes[d].size())) break;
                idx[d] = 0;
                --d;
            }
            if (d < 0) break;
        }
    }
    auto objective = [&](const Vec& z) {
        double sum = 0.0;
        for (size_t k = 0; k < nodes.size(); ++k)
            sum += weights[k] * std::exp(-star_vals[k] + z.dot(nodes[k]));
        return sum;
    };

    Vec z = Vec::Zero(n);
    double fz = objective(z);
    double step = 0.25;
    for (int it = 0; it < max_iters; ++it) {
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec zt = z;
                zt(i) += sgn * step;
                double ft = objective(zt);
                if (ft < fz - 1e-15) {
                    z = zt;
                    fz = ft;
                    moved = true;
                }
            }
        }
        if (!moved) {
            step *= 0.5;
            if (step < 1e-6) return z;
        }
    }
    if (step >= 1e-4) throw NoConvergence("santalo_point compass search did not settle");
    return z;
    (void)spec;
}

std::vector<AsaSweep::Node> AsaSweep::build_level(const ConvexFunctionOracle& psi,
                                                  long per_axis) {
    static const double gn[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const int n = psi.dim;
    const Box& box = psi.bounding_box;
    long panels = std::max<long>(1, per_axis / 8);
    std::vector<std::vector<double>> ax_nodes(n), ax_weights(n);
    for (int i = 0; i < n; ++i) {
        double w = (box.hi(i) - box.lo(i)) / static_cast<double>(panels);
        for (long p = 0; p < panels; ++p) {
            double a = box.lo(i) + p * w, mid = a + 0.5 * w, half = 0.5 * w;
            for (int k = 3; k >= 0; --k) {
                ax_nodes[i].push_back(mid - half * gn[k]);
                ax_weights[i].push_back(half * gw[k]);
            }
            for (int k = 0; k < 4; ++k) {
                ax_nodes[i].push_back(mid + half * gn[k]);
                ax_weights[i].push_back(half * gw[k]);
            }
        }
    }
    std::vector<Node> out;
    std::vector<long> idx(n, 0);
    Vec x(n);
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            x(i) = ax_nodes[i][idx[i]];
            w *= ax_weights[i][idx[i]];
        }
        double v = psi.eval(x);
        if (std::isfinite(v) && psi.locate(x) == DomainLocation::interior) {
            Node node;
            node.w = w;
            node.psi = v;
            Mat H;
            bool ok = true;
            try {
                H = psi.hessian(x);
            } catch (const Error&) {
                ok = false;
            }
            if (ok && H.allFinite()) {
                node.det = H.determinant();
                node.dual_arg = x.dot(psi.gradient(x)) - v;
                out.push_back(node);
            }
        }
        int d = n - 1;
        while (d >= 0) {
            if (++idx[d] < static_cast<long>(ax_nodes[d].size())) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

AsaSweep::AsaSweep(const ConvexFunctionOracle& psi, const IntegrationSpec& spec,
                   double det_tol)
    : det_tol_(det_tol) {
    spec.validate();
    const int n = psi.dim;
    long fine = 16;
    auto pts = [n](long per_axis) {
        long t = 1;
        for (int i = 0; i < n; ++i) t *= per_axis;
        return t;
    };
    while (pts(2 * fine) + pts(fine) <= spec.budget && 2 * fine <= 4096) fine *= 2;
    coarse_ = build_level(psi, fine / 2);
    fine_ = build_level(psi, fine);
}

double AsaSweep::level_sum(const std::vector<Node>& nodes, double lambda) const {
    double sum = 0.0;
    for (const Node& node : nodes) {
        double det = node.det;
        if (lambda <= 0.0) {
            if (det < det_tol_) continue;
        } else if (det <= 0.0) {
            continue;
        }
        double log_term = -(1.0 - lambda) * node.psi - lambda * node.dual_arg +
                          lambda * std::log(det);
        sum += node.w * std::exp(log_term);
    }
    return sum;
}

IntegrationResult AsaSweep::at(double lambda) const {
    IntegrationResult res;
    res.method = Method::lattice;
    double fine = level_sum(fine_, lambda);
    double coarse = level_sum(coarse_, lambda);
    res.value = fine;
    res.error_estimate = std::abs(fine - coarse);
    res.evals = static_cast<long>(fine_.size() + coarse_.size());
    res.converged = true;
    return res;
}

namespace {

ConvexFunctionOracle combine(const ConvexFunctionOracle& a, const ConvexFunctionOracle& b,
                             bool take_max) {
    ConvexFunctionOracle out;
    out.dim = a.dim;
    auto ea = a.eval, eb = b.eval;
    out.eval = [ea, eb, take_max](const Vec& x) {
        double va = ea(x), vb = eb(x);
        return take_max ? std::max(va, vb) : std::min(va, vb);
    };
    auto pick_a = [ea, eb, take_max](const Vec& x) {
        double va = ea(x), vb = eb(x);
        return take_max ? va >= vb : va <= vb;
    };
    auto oa = std::make_shared<ConvexFunctionOracle>(a);
    auto ob = std::make_shared<ConvexFunctionOracle>(b);
    out.grad = [oa, ob, pick_a](const Vec& x) -> Vec {
        return pick_a(x) ? oa->gradient(x) : ob->gradient(x);
    };
    out.hess = [oa, ob, pick_a](const Vec& x) -> Mat {
        return pick_a(x) ? oa->hessian(x) : ob->hessian(x);
    };
    if (take_max) {
        out.bounding_box.lo = a.bounding_box.lo.cwiseMax(b.bounding_box.lo);
        out.bounding_box.hi = a.bounding_box.hi.cwiseMin(b.bounding_box.hi);
        for (int i = 0; i < out.dim; ++i)
            if (out.bounding_box.lo(i) >= out.bounding_box.hi(i))
                throw EmptyDomain("pointwise max has empty effective support");
    } else {
        out.bounding_box.lo = a.bounding_box.lo.cwiseMin(b.bounding_box.lo);
        out.bounding_box.hi = a.bounding_box.hi.cwiseMax(b.bounding_box.hi);
    }
    return out;
}

}  // namespace

ConvexFunctionOracle pointwise_max(const ConvexFunctionOracle& a,
                                   const ConvexFunctionOracle& b) {
    return combine(a, b, true);
}

ConvexFunctionOracle pointwise_min(const ConvexFunctionOracle& a,
                                   const ConvexFunctionOracle& b) {
    return combine(a, b, false);
}

ValuationReport valuation_check(const ConvexFunctionOracle& psi1,
                                const ConvexFunctionOracle& psi2, double lambda,
                                const IntegrationSpec& spec, std::uint64_t probe_seed) {
    ConvexFunctionOracle lo = pointwise_min(psi1, psi2);
    ConvexFunctionOracle hi = pointwise_max(psi1, psi2);

    // Midpoint convexity probe of the minimum.
    Rng rng(probe_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Box& box = lo.bounding_box;
    const int n = lo.dim;
    for (int k = 0; k < 256; ++k) {
        Vec x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x(i) = box.lo(i) + u(rng) * (box.hi(i) - box.lo(i));
            y(i) = box.lo(i) + u(rng) * (box.hi(i) - box.lo(i));
        }
        double fx = lo.eval(x), fy = lo.eval(y);
        if (!std::isfinite(fx) || !std::isfinite(fy)) continue;
        double fm = lo.eval(0.5 * (x + y));
        double scale = 1.0 + std::abs(fx) + std::abs(fy);
        if (fm > 0.5 * (fx + fy) + 1e-9 * scale)
            throw NotAValuationInstance("pointwise minimum fails the convexity probe");
    }

    IntegrationResult a1 = as_lambda(lambda, psi1, spec);
    IntegrationResult a2 = as_lambda(lambda, psi2, spec);
    IntegrationResult am = as_lambda(lambda, hi, spec);
    IntegrationResult an = as_lambda(lambda, lo, spec);

    ValuationReport rep;
    rep.lhs = a1.value + a2.value;
    rep.rhs = am.value + an.value;
    rep.combined_error = a1.error_estimate + a2.error_estimate + am.error_estimate +
                         an.error_estimate;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

}  // namespace fasa
