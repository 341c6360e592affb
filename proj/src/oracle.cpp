#include "fasa/oracle.hpp"

#include <cmath>

namespace fasa {

namespace {

double softplus(double t) {
    if (t > 30.0) return t;
    if (t < -30.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

double sigmoid(double t) {
    if (t >= 0.0) {
        double e = std::exp(-t);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(t);
    return e / (1.0 + e);
}

void require_interior(const ConvexFunctionOracle& psi, const Vec& x) {
    if (psi.locate(x) == DomainLocation::outside || !std::isfinite(psi.eval(x)))
        throw OutsideDomain();
}

double eval_checked(const ConvexFunctionOracle& psi, const Vec& x) {
    double v = psi.eval(x);
    if (!std::isfinite(v)) throw OutsideDomain();
    return v;
}

}  // namespace

Vec ConvexFunctionOracle::gradient(const Vec& x) const {
    if (grad) return grad(x);
    return fd_gradient(*this, x);
}

Mat ConvexFunctionOracle::hessian(const Vec& x) const {
    if (hess) return hess(x);
    return fd_hessian(*this, x);
}

Vec fd_gradient(const ConvexFunctionOracle& psi, const Vec& x, double h) {
    require_interior(psi, x);
    const int n = psi.dim;
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (eval_checked(psi, xp) - eval_checked(psi, xm)) / (2.0 * h);
    }
    return g;
}

Mat fd_hessian(const ConvexFunctionOracle& psi, const Vec& x, double h) {
    require_interior(psi, x);
    const int n = psi.dim;
    const double f0 = eval_checked(psi, x);
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        H(i, i) = (eval_checked(psi, xp) - 2.0 * f0 + eval_checked(psi, xm)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp(i) += h; xpp(j) += h;
            xpm(i) += h; xpm(j) -= h;
            xmp(i) -= h; xmp(j) += h;
            xmm(i) -= h; xmm(j) -= h;
            double v = (eval_checked(psi, xpp) - eval_checked(psi, xpm) -
                        eval_checked(psi, xmp) + eval_checked(psi, xmm)) /
                       (4.0 * h * h);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return 0.5 * (H + H.transpose());
}

bool in_regular_set(const ConvexFunctionOracle& psi, const Vec& x, double det_tol) {
    if (psi.locate(x) != DomainLocation::interior) return false;
    if (!std::isfinite(psi.eval(x))) return false;
    Mat H;
    try {
        H = psi.hessian(x);
    } catch (const Error&) {
        return false;
    }
    if (!H.allFinite()) return false;
    return H.determinant() >= det_tol;
}

ConvexFunctionOracle translate(const ConvexFunctionOracle& psi, const Vec& z) {
    ConvexFunctionOracle out;
    out.dim = psi.dim;
    auto ev = psi.eval;
    out.eval = [ev, z](const Vec& x) { return ev(x + z); };
    if (psi.grad) {
        auto g = psi.grad;
        out.grad = [g, z](const Vec& x) { return g(x + z); };
    }
    if (psi.hess) {
        auto h = psi.hess;
        out.hess = [h, z](const Vec& x) { return h(x + z); };
    }
    if (psi.domain) {
        auto d = psi.domain;
        out.domain = [d, z](const Vec& x) { return d(x + z); };
    }
    out.bounding_box.lo = psi.bounding_box.lo - z;
    out.bounding_box.hi = psi.bounding_box.hi - z;
    return out;
}

ConvexFunctionOracle compose_linear(const ConvexFunctionOracle& psi, const Mat& A,
                                    double det_tol) {
    if (std::abs(A.determinant()) < det_tol) throw SingularMatrix();
    ConvexFunctionOracle out;
    out.dim = psi.dim;
    auto ev = psi.eval;
    out.eval = [ev, A](const Vec& x) { return ev(A * x); };
    if (psi.grad) {
        auto g = psi.grad;
        out.grad = [g, A](const Vec& x) -> Vec { return A.transpose() * g(A * x); };
    }
    if (psi.hess) {
        auto h = psi.hess;
        out.hess = [h, A](const Vec& x) -> Mat { return A.transpose() * h(A * x) * A; };
    }
    if (psi.domain) {
        auto d = psi.domain;
        out.domain = [d, A](const Vec& x) { return d(A * x); };
    }
    // Preimage of the box under A: hull of the mapped corners.
    const int n = psi.dim;
    Mat Ainv = A.inverse();
    Vec lo = Vec::Constant(n, kInf), hi = Vec::Constant(n, -kInf);
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec corner(n);
        for (int i = 0; i < n; ++i)
            corner(i) = (mask >> i & 1) ? psi.bounding_box.hi(i) : psi.bounding_box.lo(i);
        Vec mapped = Ainv * corner;
        lo = lo.cwiseMin(mapped);
        hi = hi.cwiseMax(mapped);
    }
    out.bounding_box = {lo, hi};
    return out;
}

Box estimate_bounding_box(const std::function<double(const Vec&)>& eval, int dim,
                          const Vec& anchor) {
    const double level = eval(anchor) + kLogTailCutoff;
    auto ray_extent = [&](const Vec& dir) -> double {
        // Largest multiple of dir staying below the level and inside the domain.
        double t_in = 0.0, t_out = 1e-3;
        for (int iter = 0; iter < 90; ++iter) {
            double v = eval(anchor + t_out * dir);
            if (!std::isfinite(v) || v >= level) break;
            t_in = t_out;
            t_out *= 2.0;
            if (t_out > 1e12) return t_out;
        }
        for (int iter = 0; iter < 60; ++iter) {
            double mid = 0.5 * (t_in + t_out);
            double v = eval(anchor + mid * dir);
            if (std::isfinite(v) && v < level)
                t_in = mid;
            else
                t_out = mid;
        }
        return t_out;
    };

    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) {
        Vec e = Vec::Zero(dim);
        e(i) = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    if (dim > 1) {
        for (int mask = 0; mask < (1 << dim); ++mask) {
            Vec d(dim);
            for (int i = 0; i < dim; ++i) d(i) = (mask >> i & 1) ? 1.0 : -1.0;
            dirs.push_back(d / d.norm());
        }
    }

    Vec lo = anchor, hi = anchor;
    for (const Vec& d : dirs) {
        Vec p = anchor + ray_extent(d) * d;
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Vec pad = 0.05 * (hi - lo).cwiseMax(1e-6);
    return {lo - pad, hi + pad};
}

QuadraticForm::QuadraticForm(Mat A_, Vec center_, double offset_)
    : A(std::move(A_)), center(std::move(center_)), offset(offset_) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw SingularMatrix("QuadraticForm matrix must be positive definite");
}

ConvexFunctionOracle QuadraticForm::oracle() const {
    ConvexFunctionOracle out;
    out.dim = dim();
    QuadraticForm q = *this;
    out.eval = [q](const Vec& x) { return q.value(x); };
    out.grad = [q](const Vec& x) { return q.gradient(x); };
    out.hess = [q](const Vec& x) {
        (void)x;
        return q.A;
    };
    // Exact level-set box: sup{|x_i - z_i| : <A(x-z),x-z>/2 <= L} = sqrt(2 L (A^-1)_ii).
    Mat Ainv = A.inverse();
    Vec half(dim());
    for (int i = 0; i < dim(); ++i)
        half(i) = std::sqrt(2.0 * kLogTailCutoff * Ainv(i, i)) * 1.02;
    out.bounding_box = {center - half, center + half};
    return out;
}

double SmoothConvexFamily::value(const Vec& x) const {
    double v = base.value(x);
    for (const auto& r : ridges) v += r.weight * softplus(r.direction.dot(x) + r.bias);
    return v;
}

Vec SmoothConvexFamily::gradient(const Vec& x) const {
    Vec g = base.gradient(x);
    for (const auto& r : ridges) g += r.weight * sigmoid(r.direction.dot(x) + r.bias) * r.direction;
    return g;
}

Mat SmoothConvexFamily::hessian(const Vec& x) const {
    Mat H = base.A;
    for (const auto& r : ridges) {
        double s = sigmoid(r.direction.dot(x) + r.bias);
        H += r.weight * s * (1.0 - s) * r.direction * r.direction.transpose();
    }
    return H;
}

ConvexFunctionOracle SmoothConvexFamily::oracle() const {
    ConvexFunctionOracle out;
    out.dim = dim();
    SmoothConvexFamily f = *this;
    out.eval = [f](const Vec& x) { return f.value(x); };
    out.grad = [f](const Vec& x) { return f.gradient(x); };
    out.hess = [f](const Vec& x) { return f.hessian(x); };
    out.bounding_box =
        estimate_bounding_box(out.eval, dim(), base.center);
    return out;
}

SmoothConvexFamily SmoothConvexFamily::random(int n, std::uint64_t seed) {
    Rng rng(seed);
    SmoothConvexFamily f;
    f.seed = seed;
    Mat A = random_spd(n, rng, 0.6, 2.0);
    std::uniform_real_distribution<double> center_d(-0.3, 0.3);
    Vec z(n);
    for (int i = 0; i < n; ++i) z(i) = center_d(rng);
    f.base = QuadraticForm(A, z, 0.0);
    std::uniform_int_distribution<int> count_d(2, 4);
    std::uniform_real_distribution<double> w_d(0.1, 1.0), b_d(-1.0, 1.0);
    int k = count_d(rng);
    for (int j = 0; j < k; ++j) {
        RidgeTerm r;
        r.weight = w_d(rng);
        r.direction = random_unit(n, rng);
        r.bias = b_d(rng);
        f.ridges.push_back(r);
    }
    return f;
}

ConvexFunctionOracle grid_oracle(const std::vector<Vec>& axes,
                                 const std::vector<double>& values_row_major) {
    const int n = static_cast<int>(axes.size());
    std::vector<long> sizes(n), strides(n);
    long total = 1;
    for (int i = n - 1; i >= 0; --i) {
        sizes[i] = axes[i].size();
        strides[i] = total;
        total *= sizes[i];
    }
    if (total != static_cast<long>(values_row_major.size()))
        throw ScenarioError("grid values count does not match axes");

    auto eval = [axes, values_row_major, sizes, strides, n](const Vec& x) -> double {
        std::vector<long> idx(n);
        std::vector<double> frac(n);
        for (int i = 0; i < n; ++i) {
            const Vec& ax = axes[i];
            if (x(i) < ax(0) || x(i) > ax(ax.size() - 1)) return kInf;
            long j = 0;
            while (j + 2 < ax.size() && ax(j + 1) <= x(i)) ++j;
            idx[i] = j;
            frac[i] = (x(i) - ax(j)) / (ax(j + 1) - ax(j));
        }
        double acc = 0.0;
        for (int corner = 0; corner < (1 << n); ++corner) {
            double w = 1.0;
            long off = 0;
            for (int i = 0; i < n; ++i) {
                bool hi = corner >> i & 1;
                w *= hi ? frac[i] : (1.0 - frac[i]);
                off += (idx[i] + (hi ? 1 : 0)) * strides[i];
            }
            double v = values_row_major[off];
            if (!std::isfinite(v)) {
                if (w > 1e-14) return kInf;
                continue;
            }
            acc += w * v;
        }
        return acc;
    };

    ConvexFunctionOracle out;
    out.dim = n;
    out.eval = eval;
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo(i) = axes[i](0);
        hi(i) = axes[i](axes[i].size() - 1);
    }
    out.bounding_box = {lo, hi};
    return out;
}

}  // namespace fasa
