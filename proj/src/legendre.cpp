#include "fasa/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace fasa {

QuadraticForm legendre_quadratic(const QuadraticForm& q) {
    if (q.center.norm() > 1e-12)
        throw Error("legendre_quadratic requires a centered form; translate first");
    return QuadraticForm(q.A.inverse(), Vec::Zero(q.dim()), -q.offset);
}

namespace {

Vec clip_to_box(Vec x, const Box& box) {
    return x.cwiseMax(box.lo).cwiseMin(box.hi);
}

double objective(const ConvexFunctionOracle& psi, const Vec& y, const Vec& x) {
    double v = psi.eval(x);
    if (!std::isfinite(v)) return -kInf;
    return x.dot(y) - v;
}

Vec objective_gradient(const ConvexFunctionOracle& psi, const Vec& y, const Vec& x) {
    if (psi.grad) return y - psi.grad(x);
    return y - fd_gradient(psi, x);
}

// Ascent from one start; returns best point found.
void ascend(const ConvexFunctionOracle& psi, const Vec& y, const Box& box, Vec& x,
            double& fx, const SolverOptions& opts) {
    double step = 1.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        Vec g;
        try {
            g = objective_gradient(psi, y, x);
        } catch (const OutsideDomain&) {
            // Stencil straddles the domain edge: nudge inward and retry once.
            x = clip_to_box(x + 1e-6 * (0.5 * (box.lo + box.hi) - x), box);
            fx = objective(psi, y, x);
            continue;
        }
        double gn = g.norm();
        if (gn < 1e-14) break;
        bool improved = false;
        double t = step;
        for (int bt = 0; bt < 50; ++bt) {
            Vec xn = clip_to_box(x + t * g, box);
            double fn = objective(psi, y, xn);
            if (fn > fx + 1e-16) {
                double gain = fn - fx;
                x = xn;
                fx = fn;
                step = std::min(t * 2.0, 1e6);
                improved = true;
                if (gain < opts.tol * (1.0 + std::abs(fx))) it = opts.max_iters;
                break;
            }
            t *= 0.5;
            if (t < 1e-15) break;
        }
        if (!improved) break;
    }
}

}  // namespace

LegendreValue legendre_at(const ConvexFunctionOracle& psi, const Vec& y,
                          const SolverOptions& opts) {
    const Box& box = psi.bounding_box;
    const int n = psi.dim;
    std::vector<Vec> starts;
    Vec mid = 0.5 * (box.lo + box.hi);
    starts.push_back(mid);
    for (int i = 0; i < n; ++i) {
        Vec lo_face = mid, hi_face = mid;
        lo_face(i) = box.lo(i) + 1e-9 * (box.hi(i) - box.lo(i));
        hi_face(i) = box.hi(i) - 1e-9 * (box.hi(i) - box.lo(i));
        starts.push_back(lo_face);
        starts.push_back(hi_face);
    }
    if (opts.restarts_extra > 0) {
        Rng rng(opts.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < opts.restarts_extra; ++k) {
            Vec x(n);
            for (int i = 0; i < n; ++i) x(i) = box.lo(i) + u(rng) * (box.hi(i) - box.lo(i));
            starts.push_back(x);
        }
    }

    Vec best;
    double fbest = -kInf;
    for (Vec x : starts) {
        double fx = objective(psi, y, x);
        if (!std::isfinite(fx)) {
            // Start outside the domain: pull toward the anchor until feasible.
            for (int k = 0; k < 60 && !std::isfinite(fx); ++k) {
                x = 0.5 * (x + mid);
                fx = objective(psi, y, x);
            }
            if (!std::isfinite(fx)) continue;
        }
        ascend(psi, y, box, x, fx, opts);
        if (fx > fbest) {
            fbest = fx;
            best = x;
        }
    }
    if (!std::isfinite(fbest)) throw EmptyDomain("no feasible start for conjugate solve");

    // Unboundedness: outward slope at an active box face above the margin.
    Vec g;
    bool have_grad = true;
    try {
        g = objective_gradient(psi, y, best);
    } catch (const OutsideDomain&) {
        have_grad = false;
    }
    if (have_grad) {
        for (int i = 0; i < n; ++i) {
            double width = box.hi(i) - box.lo(i);
            bool at_hi = best(i) >= box.hi(i) - 1e-7 * width;
            bool at_lo = best(i) <= box.lo(i) + 1e-7 * width;
            if ((at_hi && g(i) > opts.slope_margin) || (at_lo && -g(i) > opts.slope_margin))
                throw Unbounded("conjugate objective still increasing at the box edge");
        }
    }
    return {fbest, best};
}

ConvexFunctionOracle dual_oracle(const ConvexFunctionOracle& psi, const SolverOptions& opts) {
    struct WarmCache {
        std::mutex mu;
        bool has = false;
        Vec y;
        Vec x;
    };
    auto cache = std::make_shared<WarmCache>();
    auto psi_copy = std::make_shared<ConvexFunctionOracle>(psi);

    auto solve = [psi_copy, cache, opts](const Vec& y) -> LegendreValue {
        SolverOptions o = opts;
        LegendreValue lv;
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            if (cache->has && (cache->y - y).norm() < 1.0) {
                // Warm start: single ascent from the previous maximizer,
                // then fall through to the multi-start only if suspicious.
                Vec x = cache->x;
                double fx = x.dot(y) - psi_copy->eval(x);
                if (std::isfinite(fx)) {
                    ascend(*psi_copy, y, psi_copy->bounding_box, x, fx, o);
                    lv = {fx, x};
                    cache->y = y;
                    cache->x = x;
                    // Edge check as in legendre_at.
                    const Box& box = psi_copy->bounding_box;
                    bool edge_ok = true;
                    try {
                        Vec g = objective_gradient(*psi_copy, y, x);
                        for (int i = 0; i < psi_copy->dim; ++i) {
                            double width = box.hi(i) - box.lo(i);
                            bool at_hi = x(i) >= box.hi(i) - 1e-7 * width;
                            bool at_lo = x(i) <= box.lo(i) + 1e-7 * width;
                            if ((at_hi && g(i) > o.slope_margin) ||
                                (at_lo && -g(i) > o.slope_margin))
                                edge_ok = false;
                        }
                    } catch (const OutsideDomain&) {
                    }
                    if (!edge_ok) throw Unbounded("conjugate objective increasing at box edge");
                    return lv;
                }
            }
        }
        lv = legendre_at(*psi_copy, y, o);
        std::lock_guard<std::mutex> lock(cache->mu);
        cache->has = true;
        cache->y = y;
        cache->x = lv.argmax;
        return lv;
    };

    ConvexFunctionOracle out;
    out.dim = psi.dim;
    out.eval = [solve](const Vec& y) -> double {
        try {
            return solve(y).value;
        } catch (const Unbounded&) {
            return kInf;
        }
    };
    out.grad = [solve](const Vec& y) -> Vec { return solve(y).argmax; };
    out.hess = [solve, psi_copy](const Vec& y) -> Mat {
        Vec x = solve(y).argmax;
        Mat H = psi_copy->hessian(x);
        return H.inverse();
    };
    out.bounding_box = estimate_bounding_box(out.eval, psi.dim, Vec::Zero(psi.dim));
    return out;
}

double& GridFunction::at(const std::vector<long>& idx) {
    long off = 0;
    for (int i = 0; i < dim(); ++i) off = off * axes[i].size() + idx[i];
    return values[off];
}

double GridFunction::at(const std::vector<long>& idx) const {
    long off = 0;
    for (int i = 0; i < dim(); ++i) off = off * axes[i].size() + idx[i];
    return values[off];
}

GridFunction GridFunction::sample(const ConvexFunctionOracle& psi, const Box& box,
                                  long points_per_axis) {
    GridFunction g;
    const int n = box.dim();
    for (int i = 0; i < n; ++i) {
        Vec ax(points_per_axis);
        for (long j = 0; j < points_per_axis; ++j)
            ax(j) = box.lo(i) +
                    (box.hi(i) - box.lo(i)) * static_cast<double>(j) /
                        static_cast<double>(points_per_axis - 1);
        g.axes.push_back(ax);
    }
    g.values.resize(g.size());
    std::vector<long> idx(n, 0);
    Vec x(n);
    for (long k = 0;; ++k) {
        for (int i = 0; i < n; ++i) x(i) = g.axes[i](idx[i]);
        g.values[k] = psi.eval(x);
        int d = n - 1;
        while (d >= 0) {
            if (++idx[d] < g.axes[d].size()) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return g;
}

void GridFunction::write_csv(std::ostream& os) const {
    os << "dim," << dim() << "\n";
    for (int i = 0; i < dim(); ++i) {
        os << "axis" << i;
        for (long j = 0; j < axes[i].size(); ++j) os << "," << axes[i](j);
        os << "\n";
    }
    os << "values";
    for (double v : values) {
        os << ",";
        if (std::isinf(v))
            os << (v > 0 ? "inf" : "-inf");
        else
            os << v;
    }
    os << "\n";
}

GridFunction GridFunction::read_csv(std::istream& is) {
    GridFunction g;
    std::string line;
    if (!std::getline(is, line)) throw ScenarioError("empty grid csv");
    int n = 0;
    {
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        if (tok != "dim") throw ScenarioError("grid csv missing dim header");
        std::getline(ss, tok, ',');
        n = std::stoi(tok);
    }
    for (int i = 0; i < n; ++i) {
        if (!std::getline(is, line)) throw ScenarioError("grid csv truncated");
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        Vec ax(static_cast<long>(vals.size()));
        for (size_t j = 0; j < vals.size(); ++j) ax(static_cast<long>(j)) = vals[j];
        g.axes.push_back(ax);
    }
    if (!std::getline(is, line)) throw ScenarioError("grid csv truncated");
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    while (std::getline(ss, tok, ',')) {
        if (tok == "inf")
            g.values.push_back(kInf);
        else if (tok == "-inf")
            g.values.push_back(-kInf);
        else
            g.values.push_back(std::stod(tok));
    }
    return g;
}

namespace {

// 1-D discrete conjugate: g*(y) = max_i (x_i y - f_i) via the lower convex
// hull of (x_i, f_i) and a two-pointer sweep over sorted slopes.
void conjugate_1d(const double* xs, const double* fs, long nx, const double* ys,
                  double* out, long ny) {
    std::vector<long> hull;
    hull.reserve(nx);
    for (long i = 0; i < nx; ++i) {
        if (!std::isfinite(fs[i])) continue;
        while (hull.size() >= 2) {
            long a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // Keep b only if it lies strictly below chord a-i.
            double cross = (xs[b] - xs[a]) * (fs[i] - fs[a]) -
                           (xs[i] - xs[a]) * (fs[b] - fs[a]);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    if (hull.empty()) {
        for (long j = 0; j < ny; ++j) out[j] = -kInf;
        return;
    }
    size_t k = 0;
    for (long j = 0; j < ny; ++j) {
        double y = ys[j];
        while (k + 1 < hull.size()) {
            long a = hull[k], b = hull[k + 1];
            double slope = (fs[b] - fs[a]) / (xs[b] - xs[a]);
            if (slope <= y)
                ++k;
            else
                break;
        }
        long i = hull[k];
        out[j] = xs[i] * y - fs[i];
    }
}

Vec slope_axis(const GridFunction& g, int axis) {
    // Range of finite-difference slopes along `axis`, padded slightly.
    const int n = g.dim();
    double smin = kInf, smax = -kInf;
    std::vector<long> idx(n, 0);
    const Vec& ax = g.axes[axis];
    for (;;) {
        for (long j = 0; j + 1 < ax.size(); ++j) {
            std::vector<long> a = idx, b = idx;
            a[axis] = j;
            b[axis] = j + 1;
            double fa = g.at(a), fb = g.at(b);
            if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
            double s = (fb - fa) / (ax(j + 1) - ax(j));
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
        int d = n - 1;
        while (d >= 0) {
            if (d == axis) {
                --d;
                continue;
            }
            if (++idx[d] < g.axes[d].size()) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    if (!std::isfinite(smin)) throw EmptyDomain("grid function has no finite values");
    double pad = 1e-9 + 0.01 * (smax - smin);
    smin -= pad;
    smax += pad;
    long m = ax.size();
    Vec out(m);
    for (long j = 0; j < m; ++j)
        out(j) = smin + (smax - smin) * static_cast<double>(j) / static_cast<double>(m - 1);
    return out;
}

// Conjugate along one axis, replacing that axis with dual nodes.
GridFunction conjugate_axis(const GridFunction& g, int axis, const Vec& dual_ax) {
    GridFunction out;
    out.axes = g.axes;
    out.axes[axis] = dual_ax;
    out.values.assign(out.size(), -kInf);
    const int n = g.dim();
    const Vec& ax = g.axes[axis];
    long nx = ax.size(), ny = dual_ax.size();
    std::vector<double> xs(nx), fs(nx), line(ny);
    std::vector<long> idx(n, 0);
    for (;;) {
        std::vector<long> a = idx;
        for (long j = 0; j < nx; ++j) {
            a[axis] = j;
            xs[j] = ax(j);
            fs[j] = g.at(a);
        }
        conjugate_1d(xs.data(), fs.data(), nx, dual_ax.data(), line.data(), ny);
        std::vector<long> b = idx;
        for (long j = 0; j < ny; ++j) {
            b[axis] = j;
            out.at(b) = line[j];
        }
        int d = n - 1;
        while (d >= 0) {
            if (d == axis) {
                --d;
                continue;
            }
            if (++idx[d] < g.axes[d].size()) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

}  // namespace

GridFunction legendre_grid_on(const GridFunction& g, const std::vector<Vec>& dual_axes) {
    if (g.dim() < 1 || g.dim() > 3)
        throw UnsupportedDimension("legendre_grid supports n <= 3");
    bool any_finite = false;
    for (double v : g.values)
        if (std::isfinite(v)) any_finite = true;
    if (!any_finite) throw EmptyDomain("all grid values are +inf");

    GridFunction cur = conjugate_axis(g, 0, dual_axes[0]);
    for (int axis = 1; axis < g.dim(); ++axis) {
        for (double& v : cur.values) v = -v;  // conjugate the negated intermediate
        // -(-inf) = +inf marks empty slices as excluded, as required.
        cur = conjugate_axis(cur, axis, dual_axes[axis]);
    }
    // Replace -inf (empty slices) with +inf: the conjugate is +inf there.
    for (double& v : cur.values)
        if (v == -kInf) v = kInf;
    return cur;
}

GridFunction legendre_grid(const GridFunction& g) {
    if (g.dim() < 1 || g.dim() > 3)
        throw UnsupportedDimension("legendre_grid supports n <= 3");
    std::vector<Vec> dual_axes;
    GridFunction work = g;
    // Derive each dual axis from the data just before conjugating that axis.
    GridFunction cur = g;
    dual_axes.push_back(slope_axis(cur, 0));
    cur = conjugate_axis(cur, 0, dual_axes[0]);
    for (int axis = 1; axis < g.dim(); ++axis) {
        GridFunction neg = cur;
        for (double& v : neg.values) v = -v;
        dual_axes.push_back(slope_axis(neg, axis));
        for (double& v : cur.values) v = -v;
        cur = conjugate_axis(cur, axis, dual_axes[axis]);
    }
    for (double& v : cur.values)
        if (v == -kInf) v = kInf;
    return cur;
}

YoungReport young_check(const ConvexFunctionOracle& psi,
                        const std::vector<std::pair<Vec, Vec>>& pairs, double tol,
                        const SolverOptions& opts) {
    YoungReport rep;
    for (const auto& [x, y] : pairs) {
        ++rep.pairs;
        double px = psi.eval(x);
        if (!std::isfinite(px)) continue;
        double pstar;
        try {
            pstar = legendre_at(psi, y, opts).value;
        } catch (const Unbounded&) {
            continue;  // psi*(y) = +inf: inequality holds trivially
        }
        double gap = px + pstar - x.dot(y);
        if (gap < -tol) {
            ++rep.inequality_violations;
            rep.worst_inequality_gap = std::min(rep.worst_inequality_gap, gap);
        }
        if (in_regular_set(psi, x)) {
            ++rep.regular_points;
            Vec gx = psi.gradient(x);
            double lhs = legendre_at(psi, gx, opts).value;
            double rhs = x.dot(gx) - px;
            rep.worst_equality_residual =
                std::max(rep.worst_equality_residual, std::abs(lhs - rhs));
        }
    }
    return rep;
}

McCannReport mccann_identity_check(const ConvexFunctionOracle& psi, const Integrand& f,
                                   const IntegrationSpec& spec, double det_tol) {
    McCannReport rep;
    auto lhs_integrand = [&psi, &f, det_tol](const Vec& x) -> double {
        if (!in_regular_set(psi, x, det_tol)) return 0.0;
        Mat H = psi.hessian(x);
        return f(psi.gradient(x)) * H.determinant();
    };
    IntegrationResult lhs = integrate_box(lhs_integrand, psi.bounding_box, spec);

    ConvexFunctionOracle star = dual_oracle(psi);
    auto rhs_integrand = [&star, &f, det_tol](const Vec& y) -> double {
        if (!in_regular_set(star, y, det_tol)) return 0.0;
        return f(y);
    };
    IntegrationResult rhs = integrate_box(rhs_integrand, star.bounding_box, spec);

    rep.lhs = lhs.value;
    rep.rhs = rhs.value;
    rep.combined_error = lhs.error_estimate + rhs.error_estimate;
    double scale = std::max({std::abs(lhs.value), std::abs(rhs.value), 1e-300});
    rep.residual = std::abs(lhs.value - rhs.value) / scale;
    return rep;
}

}  // namespace fasa
