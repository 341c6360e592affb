#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace fasa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box; all integration domains in this library are boxes
/// intersected with an oracle's domain indicator.
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const { return (hi - lo).prod(); }
    bool contains(const Vec& x) const {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
    static Box cube(int n, double half_width) {
        Box b;
        b.lo = Vec::Constant(n, -half_width);
        b.hi = Vec::Constant(n, half_width);
        return b;
    }
};

using Rng = std::mt19937_64;

inline Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

/// Random symmetric positive-definite matrix with eigenvalues in
/// [eig_min, eig_max], drawn from a seeded generator.
inline Mat random_spd(int n, Rng& rng, double eig_min = 0.5, double eig_max = 2.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    std::uniform_real_distribution<double> unif(eig_min, eig_max);
    Vec eigs(n);
    for (int i = 0; i < n; ++i) eigs(i) = unif(rng);
    return q * eigs.asDiagonal() * q.transpose();
}

inline Vec random_unit(int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(n);
    do {
        for (int i = 0; i < n; ++i) u(i) = gauss(rng);
    } while (u.norm() < 1e-12);
    return u / u.norm();
}

}  // namespace fasa
