#include "fasa/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace fasa {

namespace {

constexpr std::array<double, 4> kGl8Nodes = {0.1834346424956498, 0.5255324099163290,
                                             0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGl8Weights = {0.3626837833783620, 0.3137066458778873,
                                               0.2223810344533745, 0.1012285362903763};
constexpr std::array<double, 2> kGl4Nodes = {0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 2> kGl4Weights = {0.6521451548625461, 0.3478548451374538};

struct Axis1d {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Composite 8-point Gauss-Legendre with `panels` equal panels on [lo, hi].
Axis1d composite_gl8(double lo, double hi, long panels) {
    Axis1d ax;
    double w = (hi - lo) / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
        double a = lo + p * w, mid = a + 0.5 * w, half = 0.5 * w;
        for (int k = 3; k >= 0; --k) {
            ax.nodes.push_back(mid - half * kGl8Nodes[k]);
            ax.weights.push_back(half * kGl8Weights[k]);
        }
        for (int k = 0; k < 4; ++k) {
            ax.nodes.push_back(mid + half * kGl8Nodes[k]);
            ax.weights.push_back(half * kGl8Weights[k]);
        }
    }
    return ax;
}

double sanitize(double v, bool& clipped) {
    if (std::isnan(v)) throw NonFiniteIntegrand();
    if (std::isinf(v)) {
        clipped = true;
        return 0.0;
    }
    return v;
}

// Tensor sum over per-axis rules; deterministic odometer order with
// compensated accumulation.
double tensor_sum(const Integrand& g, const std::vector<Axis1d>& axes, long& evals,
                  bool& clipped) {
    const int n = static_cast<int>(axes.size());
    std::vector<long> idx(n, 0);
    Vec x(n);
    double sum = 0.0, comp = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            x(i) = axes[i].nodes[idx[i]];
            w *= axes[i].weights[idx[i]];
        }
        double term = w * sanitize(g(x), clipped);
        ++evals;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        int d = n - 1;
        while (d >= 0) {
            if (++idx[d] < static_cast<long>(axes[d].nodes.size())) break;
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return sum;
}

long pow_long(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

IntegrationResult lattice_box(const Integrand& g, const Box& box,
                              const IntegrationSpec& spec) {
    const int n = box.dim();
    if (n < 1 || n > 4) throw UnsupportedDimension("integrate_box supports n <= 4");
    IntegrationResult res;
    res.method = Method::lattice;
    double prev = 0.0;
    bool have_prev = false;
    for (int level = 0;; ++level) {
        long panels = 1L << level;
        long pts = pow_long(8 * panels, n);
        if (level > 0 && res.evals + pts > spec.budget) break;
        std::vector<Axis1d> axes;
        axes.reserve(n);
        for (int i = 0; i < n; ++i)
            axes.push_back(composite_gl8(box.lo(i), box.hi(i), panels));
        double val = tensor_sum(g, axes, res.evals, res.clipped_infinities);
        if (have_prev) {
            res.error_estimate = std::abs(val - prev);
            res.value = val;
            double scale = std::max(std::abs(val), 1e-300);
            if (res.error_estimate <= spec.rel_tol * scale) {
                res.converged = true;
                break;
            }
        } else {
            res.value = val;
            res.error_estimate = std::abs(val);
        }
        prev = val;
        have_prev = true;
    }
    return res;
}

struct Region {
    Box box;
    double value;
    double error;
};

struct RegionCompare {
    bool operator()(const Region& a, const Region& b) const { return a.error < b.error; }
};

void rate_region(const Integrand& g, Region& r, long& evals, bool& clipped) {
    const int n = r.box.dim();
    std::vector<Axis1d> fine, coarse;
    for (int i = 0; i < n; ++i) {
        fine.push_back(composite_gl8(r.box.lo(i), r.box.hi(i), 1));
        Axis1d c;
        double mid = 0.5 * (r.box.lo(i) + r.box.hi(i));
        double half = 0.5 * (r.box.hi(i) - r.box.lo(i));
        for (int k = 1; k >= 0; --k) {
            c.nodes.push_back(mid - half * kGl4Nodes[k]);
            c.weights.push_back(half * kGl4Weights[k]);
        }
        for (int k = 0; k < 2; ++k) {
            c.nodes.push_back(mid + half * kGl4Nodes[k]);
            c.weights.push_back(half * kGl4Weights[k]);
        }
        coarse.push_back(c);
    }
    double i8 = tensor_sum(g, fine, evals, clipped);
    double i4 = tensor_sum(g, coarse, evals, clipped);
    r.value = i8;
    r.error = std::abs(i8 - i4);
}

IntegrationResult adaptive_box(const Integrand& g, const Box& box,
                               const IntegrationSpec& spec) {
    const int n = box.dim();
    if (n < 1 || n > 4) throw UnsupportedDimension("integrate_box supports n <= 4");
    IntegrationResult res;
    res.method = Method::adaptive;
    std::priority_queue<Region, std::vector<Region>, RegionCompare> heap;
    Region root{box, 0.0, 0.0};
    rate_region(g, root, res.evals, res.clipped_infinities);
    double total = root.value, total_err = root.error;
    heap.push(root);
    long per_region = pow_long(8, n) + pow_long(4, n);
    while (total_err > spec.rel_tol * std::max(std::abs(total), 1e-300) &&
           res.evals + 2 * per_region <= spec.budget) {
        Region worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        int axis = 0;
        (worst.box.hi - worst.box.lo).maxCoeff(&axis);
        double mid = 0.5 * (worst.box.lo(axis) + worst.box.hi(axis));
        Region left{worst.box, 0, 0}, right{worst.box, 0, 0};
        left.box.hi(axis) = mid;
        right.box.lo(axis) = mid;
        rate_region(g, left, res.evals, res.clipped_infinities);
        rate_region(g, right, res.evals, res.clipped_infinities);
        total += left.value + right.value;
        total_err += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }
    res.value = total;
    res.error_estimate = total_err;
    res.converged = total_err <= spec.rel_tol * std::max(std::abs(total), 1e-300);
    return res;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::lattice: return "lattice";
        case Method::adaptive: return "adaptive";
        case Method::monte_carlo: return "monte_carlo";
        case Method::importance: return "importance";
    }
    return "unknown";
}

void IntegrationSpec::validate() const {
    if (budget < 1000) throw Error("IntegrationSpec budget must be >= 1000");
    if (!(rel_tol > 0.0 && rel_tol < 0.5))
        throw Error("IntegrationSpec rel_tol must lie in (0, 0.5)");
}

IntegrationResult integrate_box(const Integrand& g, const Box& box,
                                const IntegrationSpec& spec) {
    spec.validate();
    switch (spec.method) {
        case Method::adaptive: return adaptive_box(g, box, spec);
        case Method::monte_carlo:
        case Method::importance: return integrate_mc(g, uniform_sampler(box), spec);
        case Method::lattice:
        default: return lattice_box(g, box, spec);
    }
}

Sampler uniform_sampler(const Box& box) {
    double dens = 1.0 / box.volume();
    Box b = box;
    Sampler s;
    s.sample = [b](Rng& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vec x(b.dim());
        for (int i = 0; i < b.dim(); ++i) x(i) = b.lo(i) + u(rng) * (b.hi(i) - b.lo(i));
        return x;
    };
    s.density = [b, dens](const Vec& x) { return b.contains(x) ? dens : 0.0; };
    return s;
}

Sampler gaussian_sampler(const Vec& mean, const Mat& covariance) {
    Eigen::LLT<Mat> llt(covariance);
    if (llt.info() != Eigen::Success) throw SingularMatrix("covariance not SPD");
    Mat L = llt.matrixL();
    Mat cov_inv = covariance.inverse();
    const int n = static_cast<int>(mean.size());
    double log_norm = -0.5 * n * std::log(2.0 * std::numbers::pi) -
                      0.5 * std::log(covariance.determinant());
    Sampler s;
    s.sample = [mean, L, n](Rng& rng) -> Vec {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec z(n);
        for (int i = 0; i < n; ++i) z(i) = gauss(rng);
        return mean + L * z;
    };
    s.density = [mean, cov_inv, log_norm](const Vec& x) {
        Vec d = x - mean;
        return std::exp(log_norm - 0.5 * d.dot(cov_inv * d));
    };
    return s;
}

IntegrationResult integrate_mc(const Integrand& g, const Sampler& sampler,
                               const IntegrationSpec& spec) {
    spec.validate();
    IntegrationResult res;
    res.method = spec.method == Method::importance ? Method::importance : Method::monte_carlo;
    Rng rng(spec.seed);
    const long n = spec.budget;
    double sum = 0.0, sum_sq = 0.0, wsum = 0.0, wsq = 0.0;
    for (long i = 0; i < n; ++i) {
        Vec x = sampler.sample(rng);
        double p = sampler.density(x);
        if (p <= 0.0) throw DegenerateWeights("sampled point has zero density");
        double w = 1.0 / p;
        double y = sanitize(g(x), res.clipped_infinities) * w;
        sum += y;
        sum_sq += y * y;
        wsum += w;
        wsq += w * w;
    }
    res.evals = n;
    res.value = sum / static_cast<double>(n);
    double var = std::max(0.0, sum_sq / n - res.value * res.value);
    res.error_estimate = std::sqrt(var / static_cast<double>(n));
    double ess = wsum * wsum / std::max(wsq, 1e-300);
    if (ess < 0.01 * static_cast<double>(n))
        throw DegenerateWeights("effective sample size below 1% of budget");
    res.converged = res.error_estimate <= spec.rel_tol * std::max(std::abs(res.value), 1e-300);
    return res;
}

namespace {

// One pass of the product-angle rule at a given azimuthal resolution.
double sphere_pass(const SphereIntegrand& h, int n, long m, long& evals) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 2) {
        double sum = 0.0;
        for (long j = 0; j < m; ++j) {
            double th = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
            sum += h(vec2(std::cos(th), std::sin(th)));
            ++evals;
        }
        return sum * two_pi / static_cast<double>(m);
    }
    if (n == 3) {
        long mt = std::max<long>(4, m / 2);
        Axis1d polar = composite_gl8(-1.0, 1.0, std::max<long>(1, mt / 8));
        double sum = 0.0;
        for (size_t i = 0; i < polar.nodes.size(); ++i) {
            double t = polar.nodes[i];  // cos(phi)
            double st = std::sqrt(std::max(0.0, 1.0 - t * t));
            double inner = 0.0;
            for (long j = 0; j < m; ++j) {
                double th = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
                inner += h(vec3(st * std::cos(th), st * std::sin(th), t));
                ++evals;
            }
            sum += polar.weights[i] * inner * two_pi / static_cast<double>(m);
        }
        return sum;
    }
    // n == 4: u = (cos(chi), sin(chi) v) with v on S^2, d u = sin^2(chi) dchi dv.
    long mc = std::max<long>(8, m / 2);
    Axis1d chi = composite_gl8(0.0, std::numbers::pi, std::max<long>(1, mc / 8));
    Axis1d polar = composite_gl8(-1.0, 1.0, std::max<long>(1, (m / 2) / 8));
    double sum = 0.0;
    const double two_pi_over_m = two_pi / static_cast<double>(m);
    for (size_t a = 0; a < chi.nodes.size(); ++a) {
        double c = chi.nodes[a], sc = std::sin(c);
        double wa = chi.weights[a] * sc * sc;
        for (size_t i = 0; i < polar.nodes.size(); ++i) {
            double t = polar.nodes[i];
            double st = std::sqrt(std::max(0.0, 1.0 - t * t));
            for (long j = 0; j < m; ++j) {
                double th = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
                Vec u(4);
                u << std::cos(c), sc * st * std::cos(th), sc * st * std::sin(th), sc * t;
                sum += wa * polar.weights[i] * two_pi_over_m * h(u);
                ++evals;
            }
        }
    }
    return sum;
}

}  // namespace

IntegrationResult integrate_sphere(const SphereIntegrand& h, int n,
                                   const IntegrationSpec& spec) {
    spec.validate();
    if (n < 2 || n > 4) throw UnsupportedDimension("integrate_sphere supports n in {2,3,4}");
    IntegrationResult res;
    res.method = Method::lattice;
    long m = 32;
    double prev = sphere_pass(h, n, m, res.evals);
    for (;;) {
        m *= 2;
        long cost = n == 2 ? m : n == 3 ? m * m : m * m * m;
        if (res.evals + cost > spec.budget) {
            res.value = prev;
            break;
        }
        double cur = sphere_pass(h, n, m, res.evals);
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

}  // namespace fasa
