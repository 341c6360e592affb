#include "fasa/bodies.hpp"

#include <cmath>
#include <numbers>

namespace fasa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec fd_gauge_gradient(const std::function<double(const Vec&)>& g, const Vec& x) {
    const int n = static_cast<int>(x.size());
    double h = 1e-6 * (1.0 + x.norm());
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        out(i) = (g(xp) - g(xm)) / (2.0 * h);
    }
    return out;
}

Mat fd_sym_hessian(const std::function<double(const Vec&)>& g, const Vec& x, double h) {
    const int n = static_cast<int>(x.size());
    Mat H(n, n);
    double f0 = g(x);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        H(i, i) = (g(xp) - 2.0 * f0 + g(xm)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp(i) += h; xpp(j) += h;
            xpm(i) += h; xpm(j) -= h;
            xmp(i) -= h; xmp(j) += h;
            xmm(i) -= h; xmm(j) -= h;
            double v = (g(xpp) - g(xpm) - g(xmp) + g(xmm)) / (4.0 * h * h);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

// Orthonormal basis of the hyperplane orthogonal to unit vector nrm.
Mat tangent_basis(const Vec& nrm) {
    const int n = static_cast<int>(nrm.size());
    Mat col = nrm;
    Eigen::HouseholderQR<Mat> qr(col);
    Mat q = qr.householderQ();
    return q.rightCols(n - 1);
}

}  // namespace

Vec ConvexBody::gauge_gradient(const Vec& x) const {
    if (gauge_grad) return gauge_grad(x);
    return fd_gauge_gradient(gauge, x);
}

Vec ConvexBody::normal(const Vec& x) const {
    Vec g = gauge_gradient(x);
    double gn = g.norm();
    if (gn <= 0.0 || !g.allFinite()) throw FlatPoint("gauge gradient vanished");
    return g / gn;
}

ConvexFunctionOracle ConvexBody::gauge_squared_oracle() const {
    ConvexFunctionOracle out;
    out.dim = dim;
    auto g = gauge;
    out.eval = [g](const Vec& x) {
        double v = g(x);
        return 0.5 * v * v;
    };
    if (kind == "ellipsoid" || kind == "ball") {
        Mat M = kind == "ball" ? Mat::Identity(dim, dim) : ellipsoid_matrix;
        out.grad = [M](const Vec& x) -> Vec { return M * x; };
        out.hess = [M](const Vec& x) -> Mat {
            (void)x;
            return M;
        };
    } else if (gauge_grad) {
        auto gg = gauge_grad;
        out.grad = [g, gg](const Vec& x) -> Vec { return g(x) * gg(x); };
    }
    out.bounding_box = estimate_bounding_box(out.eval, dim, Vec::Zero(dim));
    return out;
}

ConvexBody make_ball(int n) {
    ConvexBody b;
    b.dim = n;
    b.kind = "ball";
    b.gauge = [](const Vec& x) { return x.norm(); };
    b.support = [](const Vec& y) { return y.norm(); };
    b.gauge_grad = [](const Vec& x) -> Vec { return x / x.norm(); };
    b.curvature_fn = [](const Vec& x) {
        (void)x;
        return 1.0;
    };
    b.smooth_positive_curvature = true;
    b.ellipsoid_matrix = Mat::Identity(n, n);
    return b;
}

ConvexBody make_ellipsoid(const Mat& M) {
    ConvexBody b;
    b.dim = static_cast<int>(M.rows());
    b.kind = "ellipsoid";
    Mat Minv = M.inverse();
    b.ellipsoid_matrix = M;
    b.gauge = [M](const Vec& x) { return std::sqrt(x.dot(M * x)); };
    b.support = [Minv](const Vec& y) { return std::sqrt(y.dot(Minv * y)); };
    b.gauge_grad = [M](const Vec& x) -> Vec { return M * x / std::sqrt(x.dot(M * x)); };
    const int n = b.dim;
    double detM = M.determinant();
    b.curvature_fn = [M, detM, n](const Vec& x) {
        Vec xb = x / std::sqrt(x.dot(M * x));  // project to the boundary
        return detM / std::pow((M * xb).norm(), n + 1);
    };
    b.smooth_positive_curvature = true;
    return b;
}

ConvexBody make_pball(int n, double q) {
    ConvexBody b;
    b.dim = n;
    b.kind = "pball";
    b.pball_exponent = q;
    b.gauge = [q](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), q);
        return std::pow(s, 1.0 / q);
    };
    double qd = q / (q - 1.0);
    b.support = [qd](const Vec& y) {
        double s = 0.0;
        for (int i = 0; i < y.size(); ++i) s += std::pow(std::abs(y(i)), qd);
        return std::pow(s, 1.0 / qd);
    };
    auto gauge = b.gauge;
    b.gauge_grad = [q, gauge](const Vec& x) -> Vec {
        double g = gauge(x);
        Vec out(x.size());
        for (int i = 0; i < x.size(); ++i) {
            double t = std::abs(x(i));
            out(i) = (x(i) >= 0 ? 1.0 : -1.0) * std::pow(t, q - 1.0) / std::pow(g, q - 1.0);
        }
        return out;
    };
    b.smooth_positive_curvature = q >= 2.0;
    return b;
}

ConvexBody make_polytope(std::vector<Vec> vertices, std::vector<Vec> halfspaces) {
    ConvexBody b;
    b.dim = static_cast<int>(vertices.front().size());
    b.kind = "polytope";
    b.vertices = std::move(vertices);
    b.halfspaces = std::move(halfspaces);
    auto hs = b.halfspaces;
    b.gauge = [hs](const Vec& x) {
        double m = 0.0;
        for (const Vec& a : hs) m = std::max(m, a.dot(x));
        return m;
    };
    auto vs = b.vertices;
    b.support = [vs](const Vec& y) {
        double m = -kInf;
        for (const Vec& v : vs) m = std::max(m, v.dot(y));
        return m;
    };
    b.gauge_grad = [hs](const Vec& x) -> Vec {
        double m = -kInf;
        const Vec* best = nullptr;
        for (const Vec& a : hs) {
            double d = a.dot(x);
            if (d > m) {
                m = d;
                best = &a;
            }
        }
        return *best;
    };
    b.curvature_fn = [](const Vec& x) {
        (void)x;
        return 0.0;  // facets are flat almost everywhere
    };
    return b;
}

ConvexBody make_cube(int n) {
    std::vector<Vec> hs, vs;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1.0;
        hs.push_back(e);
        hs.push_back(-e);
    }
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = (mask >> i & 1) ? 1.0 : -1.0;
        vs.push_back(v);
    }
    return make_polytope(vs, hs);
}

ConvexBody make_cross_polytope(int n) {
    std::vector<Vec> hs, vs;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1.0;
        vs.push_back(e);
        vs.push_back(-e);
    }
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec a(n);
        for (int i = 0; i < n; ++i) a(i) = (mask >> i & 1) ? 1.0 : -1.0;
        hs.push_back(a);
    }
    return make_polytope(vs, hs);
}

ConvexBody polar(const ConvexBody& K) {
    if (!K.origin_interior) throw OriginNotInterior();
    if (K.kind == "ball") return make_ball(K.dim);
    if (K.kind == "ellipsoid") return make_ellipsoid(K.ellipsoid_matrix.inverse());
    if (K.kind == "pball")
        return make_pball(K.dim, K.pball_exponent / (K.pball_exponent - 1.0));
    if (K.kind == "polytope") return make_polytope(K.halfspaces, K.vertices);
    ConvexBody b;
    b.dim = K.dim;
    b.kind = "generic";
    b.gauge = K.support;
    b.support = K.gauge;
    b.smooth_positive_curvature = false;
    return b;
}

double curvature(const ConvexBody& K, const Vec& x, CurvatureMethod method,
                 double flat_tol) {
    const int n = K.dim;
    double kappa;
    if (K.curvature_fn && method == CurvatureMethod::tangent_hessian) {
        kappa = K.curvature_fn(x);
    } else if (method == CurvatureMethod::tangent_hessian) {
        Vec g = K.gauge_gradient(x);
        double gn = g.norm();
        Vec nrm = g / gn;
        Mat T = tangent_basis(nrm);
        double h = 1e-4 * (1.0 + x.norm());
        Mat Hg = fd_sym_hessian(K.gauge, x, h);
        Mat II = (T.transpose() * Hg * T) / gn;
        kappa = II.determinant();
    } else {
        // det hess(gauge^2/2) * <x, N>^{n+1} at a boundary point.
        auto psi = [&K](const Vec& p) {
            double v = K.gauge(p);
            return 0.5 * v * v;
        };
        double h = 1e-4 * (1.0 + x.norm());
        Mat Hp = fd_sym_hessian(psi, x, h);
        Vec nrm = K.normal(x);
        kappa = Hp.determinant() * std::pow(x.dot(nrm), n + 1);
    }
    if (!(kappa >= flat_tol)) throw FlatPoint("curvature below tolerance");
    return kappa;
}

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(1.0 + 0.5 * n);
}

double sphere_surface(int n) {
    return n * unit_ball_volume(n);
}

IntegrationResult body_volume(const ConvexBody& K, const IntegrationSpec& spec) {
    const int n = K.dim;
    auto h = [&K, n](const Vec& u) { return std::pow(K.radial(u), n) / n; };
    return integrate_sphere(h, n, spec);
}

namespace {

// Curvature for surface integrals: closed form when available, else the
// tangent-Hessian estimator; zero signals a flat direction.
double kappa_for_integration(const ConvexBody& K, const Vec& x) {
    if (K.curvature_fn) return K.curvature_fn(x);
    try {
        return curvature(K, x, CurvatureMethod::tangent_hessian, 0.0);
    } catch (const FlatPoint&) {
        return 0.0;
    }
}

}  // namespace

IntegrationResult as_p_body(const ConvexBody& K, double p, const IntegrationSpec& spec) {
    const int n = K.dim;
    if (std::abs(p + n) < 1e-12) throw UnsupportedExponent("p = -n is a pole");
    if (!K.origin_interior) throw OriginNotInterior();
    auto h = [&K, p, n](const Vec& u) -> double {
        double r = K.radial(u);
        double rn = std::pow(r, n);
        if (p == 0.0) return rn;  // exponent collapse: as_0 = n |K|
        Vec x = r * u;
        double kappa = kappa_for_integration(K, x);
        double lam = p / (n + p);
        if (kappa <= 0.0) {
            if (p > 0.0) return 0.0;  // flat boundary contributes nothing
            return 0.0;               // p < 0: masked out of (dK)_+
        }
        Vec nrm = K.normal(x);
        double c = x.dot(nrm);
        double cpow = std::pow(c, -static_cast<double>(n) * (p - 1.0) / (n + p) - 1.0);
        return std::pow(kappa, lam) * cpow * rn;
    };
    return integrate_sphere(h, n, spec);
}

double positive_curvature_fraction(const ConvexBody& K, long samples, double flat_tol) {
    Rng rng(4242);
    long positive = 0;
    for (long k = 0; k < samples; ++k) {
        Vec u = random_unit(K.dim, rng);
        Vec x = K.boundary_point(u);
        if (kappa_for_integration(K, x) >= flat_tol) ++positive;
    }
    return static_cast<double>(positive) / static_cast<double>(samples);
}

BridgeReport theorem_norm_check(const ConvexBody& K, double p, const IntegrationSpec& spec) {
    const int n = K.dim;
    double lambda = p / (n + p);
    ConvexFunctionOracle psi = K.gauge_squared_oracle();

    // Functional side: int (det hess psi)^lambda e^{-psi} over the cone of
    // positive-curvature directions (hessian determinant vanishes elsewhere).
    auto integrand = [&psi, lambda](const Vec& x) -> double {
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
        if (det <= 1e-14) return 0.0;
        return std::pow(det, lambda) * std::exp(-v);
    };
    IntegrationResult functional = integrate_box(integrand, psi.bounding_box, spec);

    IntegrationResult body = as_p_body(K, p, spec);
    double bridge = std::pow(kTwoPi, 0.5 * n) / (n * unit_ball_volume(n));

    BridgeReport rep;
    rep.functional = functional.value;
    rep.body = bridge * body.value;
    rep.combined_error = functional.error_estimate + bridge * body.error_estimate;
    double scale = std::max({std::abs(rep.functional), std::abs(rep.body), 1e-300});
    rep.residual = std::abs(rep.functional - rep.body) / scale;
    return rep;
}

AspDualityReport asp_duality_check(const ConvexBody& K, double p,
                                   const IntegrationSpec& spec) {
    AspDualityReport rep;
    IntegrationResult primal = as_p_body(K, p, spec);
    ConvexBody Kp = polar(K);
    double pd = static_cast<double>(K.dim) * static_cast<double>(K.dim) / p;
    IntegrationResult dual = as_p_body(Kp, pd, spec);
    rep.primal = primal.value;
    rep.dual = dual.value;
    rep.combined_error = primal.error_estimate + dual.error_estimate;
    double scale = std::max({std::abs(rep.primal), std::abs(rep.dual), 1e-300});
    rep.residual = std::abs(rep.primal - rep.dual) / scale;
    return rep;
}

BodyIsoperimetricReport lp_isoperimetric_check(const ConvexBody& K, double p,
                                               const IntegrationSpec& spec) {
    const int n = K.dim;
    BodyIsoperimetricReport rep;
    IntegrationResult as_k = as_p_body(K, p, spec);
    IntegrationResult vol = body_volume(K, spec);
    double as_ball = n * unit_ball_volume(n);
    rep.ratio = as_k.value / as_ball;
    rep.bound = std::pow(vol.value / unit_ball_volume(n),
                         (static_cast<double>(n) - p) / (static_cast<double>(n) + p));
    rep.reversed = p < 0.0;
    rep.margin = rep.reversed ? rep.ratio - rep.bound : rep.bound - rep.ratio;
    rep.combined_error = as_k.error_estimate / as_ball + vol.error_estimate;
    return rep;
}

}  // namespace fasa
