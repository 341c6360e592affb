#include "fasa/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "fasa/asa.hpp"
#include "fasa/entropy.hpp"
#include "fasa/legendre.hpp"

namespace fasa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IntegrationSpec with_budget(IntegrationSpec spec, long budget) {
    spec.budget = budget;
    return spec;
}

ReportRow with_lambda(ReportRow row, double lambda) {
    row.lambda = lambda;
    return row;
}

ReportRow with_p(ReportRow row, double p) {
    row.p = p;
    return row;
}

ReportRow with_s(ReportRow row, double s) {
    row.s = s;
    return row;
}

ConvexFunctionOracle quartic_oracle_1d() {
    ConvexFunctionOracle out;
    out.dim = 1;
    out.eval = [](const Vec& x) { return 0.25 * std::pow(x(0), 4); };
    out.grad = [](const Vec& x) { return vec1(std::pow(x(0), 3)); };
    out.hess = [](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = 3.0 * x(0) * x(0);
        return h;
    };
    out.bounding_box = Box::cube(1, std::pow(4.0 * kLogTailCutoff, 0.25) * 1.05);
    return out;
}

// ---------------------------------------------------------------- legendre

SuiteResult suite_legendre(const Scenario& sc) {
    SuiteResult out;
    Rng rng(sc.seed + 5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) continue;
        const int n = fx.oracle.dim;
        std::vector<std::pair<Vec, Vec>> pairs;
        for (int k = 0; k < 64; ++k) {
            Vec x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x(i) = unif(rng) * 0.4 * fx.oracle.bounding_box.hi(i);
                y(i) = unif(rng) * 2.0;
            }
            pairs.emplace_back(x, y);
        }
        YoungReport young = young_check(fx.oracle, pairs);
        out.rows.push_back(bound_row("legendre", fx.id + "/young-violations",
                                     static_cast<double>(young.inequality_violations), 0.0,
                                     0.0));
        out.rows.push_back(
            bound_row("legendre", fx.id + "/young-equality", young.worst_equality_residual,
                      1e-7, 0.0));
        if (fx.quadratic) {
            QuadraticForm dual = legendre_quadratic(*fx.quadratic);
            double worst = 0.0;
            for (int k = 0; k < 16; ++k) {
                Vec y(n);
                for (int i = 0; i < n; ++i) y(i) = unif(rng) * 2.0;
                double solved = legendre_at(fx.oracle, y).value;
                worst = std::max(worst, std::abs(solved - dual.value(y)));
            }
            out.rows.push_back(
                bound_row("legendre", fx.id + "/conjugate-solver", worst, 1e-6, 0.0));
        }
    }
    // Grid biconjugation on the 1-D isotropic quadratic.
    {
        QuadraticForm q = QuadraticForm::isotropic(1);
        GridFunction g = GridFunction::sample(q.oracle(), Box::cube(1, 6.0), 257);
        GridFunction star = legendre_grid(g);
        GridFunction back = legendre_grid_on(star, g.axes);
        double worst = 0.0;
        for (long i = 0; i < g.size(); ++i) {
            if (!std::isfinite(g.values[i]) || !std::isfinite(back.values[i])) continue;
            worst = std::max(worst, std::abs(g.values[i] - back.values[i]));
        }
        double cell = g.axes[0](1) - g.axes[0](0);
        out.rows.push_back(bound_row("legendre", "grid/biconjugation", worst, cell, 0.0));
    }
    return out;
}

// ------------------------------------------------------------------ mccann

SuiteResult suite_mccann(const Scenario& sc) {
    SuiteResult out;
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) continue;
        IntegrationSpec spec = with_budget(sc.spec, fx.oracle.dim >= 2 ? 40000 : 100000);
        Integrand f;
        if (fx.quadratic) {
            QuadraticForm dual = legendre_quadratic(*fx.quadratic);
            f = [dual](const Vec& y) { return std::exp(-dual.value(y)); };
        } else {
            auto star = std::make_shared<ConvexFunctionOracle>(dual_oracle(fx.oracle));
            f = [star](const Vec& y) {
                double v = star->eval(y);
                return std::isfinite(v) ? std::exp(-v) : 0.0;
            };
        }
        McCannReport rep = mccann_identity_check(fx.oracle, f, spec);
        out.rows.push_back(identity_row(
            "mccann", fx.id, rep.lhs, rep.rhs,
            std::max(rep.combined_error, 1e-6 * std::max(rep.lhs, rep.rhs))));
    }
    return out;
}

// ------------------------------------------------------------- asa-duality

std::vector<double> default_duality_grid() {
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

SuiteResult suite_asa_duality(const Scenario& sc) {
    SuiteResult out;
    std::vector<double> grid = sc.lambda_grid.empty() ? default_duality_grid() : sc.lambda_grid;
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) continue;
        if (fx.quadratic) {
            QuadraticForm dual = legendre_quadratic(*fx.quadratic);
            for (double lam : grid) {
                double lhs = as_lambda_quadratic(*fx.quadratic, lam);
                double rhs = as_lambda_quadratic(dual, 1.0 - lam);
                out.rows.push_back(
                    with_lambda(identity_row("asa-duality", fx.id, lhs, rhs,
                                             1e-9 * std::abs(lhs) + 1e-12),
                                lam));
            }
        } else {
            AsaSweep primal(fx.oracle, sc.spec);
            ConvexFunctionOracle star = dual_oracle(fx.oracle);
            AsaSweep dual(star, with_budget(sc.spec, 20000));
            for (double lam : grid) {
                IntegrationResult a = primal.at(lam);
                IntegrationResult b = dual.at(1.0 - lam);
                double err = a.error_estimate + b.error_estimate +
                             1e-4 * std::max(a.value, b.value);
                out.rows.push_back(with_lambda(
                    identity_row("asa-duality", fx.id, a.value, b.value, err), lam));
            }
        }
        // lambda-log-convexity over a uniform grid, with plot data.
        std::vector<double> cgrid;
        for (int i = 0; i < 9; ++i) cgrid.push_back(-0.5 + 0.25 * i);
        ConvexityReport conv = log_convexity_check(fx.oracle, cgrid, sc.spec);
        out.rows.push_back(bound_row("asa-duality", fx.id + "/log-convexity",
                                     static_cast<double>(conv.violations.size()), 0.0, 0.0));
        ProfileData prof;
        prof.suite = "asa-duality";
        prof.fixture = fx.id;
        for (size_t i = 0; i < conv.profile.lambdas.size(); ++i)
            prof.points.push_back({conv.profile.lambdas[i], conv.profile.log_values[i]});
        out.profiles.push_back(std::move(prof));
    }
    // Homogeneity under random invertible maps (quadratic fixtures).
    Rng rng(sc.seed + 31);
    for (const auto& fx : sc.oracles) {
        if (!fx.quadratic) continue;
        const int n = fx.oracle.dim;
        for (int rep = 0; rep < 2; ++rep) {
            Mat A = random_spd(n, rng, 0.7, 1.5);
            ConvexFunctionOracle mapped = compose_linear(fx.oracle, A);
            for (double lam : {0.25, 0.75}) {
                IntegrationResult lhs = as_lambda(lam, mapped, sc.spec);
                double rhs = std::pow(std::abs(A.determinant()), 2.0 * lam - 1.0) *
                             as_lambda_quadratic(*fx.quadratic, lam);
                out.rows.push_back(with_lambda(
                    identity_row("asa-duality", fx.id + "/homogeneity", lhs.value, rhs,
                                 std::max(lhs.error_estimate, 3e-3 * rhs)),
                    lam));
            }
        }
        break;  // one fixture suffices for the suite; the acceptance run widens this
    }
    return out;
}

// ----------------------------------------------------------- isoperimetric

SuiteResult suite_isoperimetric(const Scenario& sc) {
    SuiteResult out;
    const std::vector<double> lams = {0.0, 0.1, 0.25, 0.4, 0.5};
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) continue;
        for (double lam : lams) {
            IsoperimetricReport rep = isoperimetric_check(lam, fx.oracle, sc.spec);
            out.rows.push_back(with_lambda(
                bound_row("isoperimetric", fx.id, rep.as_value, rep.bound,
                          std::max(rep.combined_error, 1e-7 * rep.bound)),
                lam));
            if (fx.quadratic && lam > 0.0) {
                out.rows.push_back(with_lambda(
                    identity_row("isoperimetric", fx.id + "/equality", rep.as_value,
                                 rep.bound,
                                 std::max(rep.combined_error, 1e-7 * rep.bound)),
                    lam));
            }
        }
        // Reversed branch for the C^2 family.
        IsoperimetricReport rev = isoperimetric_check(-0.25, fx.oracle, sc.spec);
        out.rows.push_back(with_lambda(
            bound_row("isoperimetric", fx.id + "/reversed", rev.bound, rev.as_value,
                      std::max(rev.combined_error, 1e-7 * std::abs(rev.bound))),
            -0.25));
    }
    return out;
}

// ----------------------------------------------------------------- santalo

SuiteResult suite_santalo(const Scenario& sc) {
    SuiteResult out;
    for (const auto& fx : sc.oracles) {
        const int n = fx.oracle.dim;
        SantaloReport rep;
        if (fx.quadratic) {
            QuadraticForm centered(fx.quadratic->A, Vec::Zero(n), fx.quadratic->offset);
            ConvexFunctionOracle star = legendre_quadratic(centered).oracle();
            rep = santalo_product(fx.oracle, sc.spec, &star);
        } else {
            rep = santalo_product(fx.oracle, with_budget(sc.spec, 40000));
        }
        out.rows.push_back(bound_row("santalo", fx.id, rep.product, rep.bound,
                                     std::max(rep.combined_error, 1e-7 * rep.bound)));
        if (fx.quadratic) {
            out.rows.push_back(identity_row("santalo", fx.id + "/equality", rep.product,
                                            rep.bound,
                                            std::max(rep.combined_error, 1e-6 * rep.bound)));
        }
        for (size_t i = 0; i < rep.as_lambdas.size(); ++i) {
            out.rows.push_back(with_lambda(
                bound_row("santalo", fx.id + "/as-product", rep.as_products[i], rep.bound,
                          std::max(rep.combined_error, 1e-6 * rep.bound)),
                rep.as_lambdas[i]));
        }
        // Empirical lower bound for the reverse inequality (report only).
        out.rows.push_back(
            flagged_row("santalo", fx.id + "/reverse-constant", rep.reverse_constant,
                        rep.bound > 0 ? std::pow(rep.bound, 1.0 / n) : 0.0, "info"));
        if (fx.even) {
            Vec z0 = santalo_point(fx.oracle, sc.spec);
            out.rows.push_back(
                bound_row("santalo", fx.id + "/even-point", z0.norm(), 1e-12, 0.0));
        }
    }
    // Santalo point of a shifted Gaussian: the translation recentres it.
    {
        Vec c = vec1(0.4);
        QuadraticForm q(Mat::Identity(1, 1), c, 0.0);
        Vec z0 = santalo_point(q.oracle(), with_budget(sc.spec, 30000));
        out.rows.push_back(
            bound_row("santalo", "gauss-shifted/point", (z0 - c).norm(), 1e-4, 0.0));
    }
    return out;
}

// -------------------------------------------------------------- rev-logsob

// Closed-form Gaussian quantities for covariance S = A^{-1}.
struct GaussianClosed {
    double H, I, C;
};

GaussianClosed gaussian_closed(const Mat& sigma) {
    GaussianClosed g;
    const int n = static_cast<int>(sigma.rows());
    Mat sigma_inv = sigma.inverse();
    g.H = 0.5 * (sigma.trace() - n - std::log(sigma.determinant()));
    g.I = (sigma - 2.0 * Mat::Identity(n, n) + sigma_inv).trace();
    g.C = sigma.trace() - n;
    return g;
}

SuiteResult suite_rev_logsob(const Scenario& sc) {
    SuiteResult out;
    auto run_fixture = [&](const std::string& id, const ConvexFunctionOracle& psi,
                           bool expect_equality) {
        LogConcaveMeasure mu = LogConcaveMeasure::make(psi, sc.spec);
        ReverseLogSobolevReport rep = reverse_logsob_check(mu);
        if (rep.flagged) {
            out.rows.push_back(flagged_row("rev-logsob", id, rep.lhs, rep.rhs, "flagged"));
            return;
        }
        double err = std::max(rep.combined_error, 1e-7 * (1.0 + std::abs(rep.rhs)));
        if (expect_equality)
            out.rows.push_back(identity_row("rev-logsob", id, rep.lhs, rep.rhs, err));
        else
            out.rows.push_back(bound_row("rev-logsob", id, rep.lhs, rep.rhs, err));
        out.rows.push_back(bound_row("rev-logsob", id + "/boundary", rep.boundary_value,
                                     psi.dim + 1e-3, err));
    };
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) {
            LogConcaveMeasure mu = LogConcaveMeasure::make(fx.oracle, sc.spec);
            ReverseLogSobolevReport rep = reverse_logsob_check(mu);
            out.rows.push_back(flagged_row("rev-logsob", fx.id, rep.lhs, rep.rhs,
                                           rep.flagged ? "flagged" : "pass"));
            continue;
        }
        run_fixture(fx.id, fx.oracle, static_cast<bool>(fx.quadratic));
    }
    run_fixture("quartic-1d", quartic_oracle_1d(), false);
    return out;
}

// ------------------------------------------------------------------ logsob

SuiteResult suite_logsob(const Scenario& sc) {
    SuiteResult out;
    for (const auto& fx : sc.oracles) {
        if (!fx.smooth) continue;
        LogConcaveMeasure mu = LogConcaveMeasure::make(fx.oracle, sc.spec);
        LogSobolevReport rep = logsob_improved_check(mu);
        double err = 1e-6 * (1.0 + std::abs(rep.hic.relative_entropy));
        out.rows.push_back(bound_row("logsob", fx.id + "/improved",
                                     rep.hic.relative_entropy, rep.improved_rhs, err));
        out.rows.push_back(bound_row("logsob", fx.id + "/weak", rep.hic.relative_entropy,
                                     rep.weak_rhs, err));
        if (fx.quadratic) {
            GaussianClosed closed = gaussian_closed(fx.quadratic->A.inverse());
            out.rows.push_back(identity_row("logsob", fx.id + "/H-closed",
                                            rep.hic.relative_entropy, closed.H, 1e-6));
            out.rows.push_back(identity_row("logsob", fx.id + "/I-closed",
                                            rep.hic.fisher_information, closed.I, 1e-6));
            // The refined bound is tight for every centered Gaussian.
            out.rows.push_back(identity_row("logsob", fx.id + "/gaussian-tight",
                                            rep.improved_margin, 0.0, 1e-6));
        }
    }
    return out;
}

// ------------------------------------------------------------------ bodies

SuiteResult suite_bodies(const Scenario& sc) {
    SuiteResult out;
    for (const auto& bf : sc.bodies) {
        const ConvexBody& K = bf.body;
        const int n = K.dim;
        double ball_value = n * unit_ball_volume(n);
        if (K.kind == "ball") {
            for (double p : {0.0, 1.0, 2.0, 10.0}) {
                IntegrationResult r = as_p_body(K, p, sc.spec);
                out.rows.push_back(with_p(
                    identity_row("bodies", bf.id + "/ball-value", r.value, ball_value,
                                 std::max(r.error_estimate, 1e-6 * ball_value)),
                    p));
            }
        }
        if (K.kind == "polytope") {
            for (double p : {1.0, 2.0}) {
                IntegrationResult r = as_p_body(K, p, sc.spec);
                out.rows.push_back(
                    with_p(identity_row("bodies", bf.id + "/flat-zero", r.value, 0.0, 1e-9),
                           p));
            }
            IntegrationResult z = as_p_body(K, 0.0, sc.spec);
            IntegrationResult vol = body_volume(K, sc.spec);
            out.rows.push_back(with_p(
                identity_row("bodies", bf.id + "/as0-volume", z.value, n * vol.value,
                             std::max(z.error_estimate + n * vol.error_estimate,
                                      1e-6 * z.value)),
                0.0));
        }
        if (K.kind == "ellipsoid") {
            Eigen::SelfAdjointEigenSolver<Mat> es(K.ellipsoid_matrix);
            Mat Aff = es.operatorInverseSqrt();  // K = Aff(ball)
            double det_aff = Aff.determinant();
            for (double p : {1.0, 2.0}) {
                IntegrationResult r = as_p_body(K, p, sc.spec);
                double expected = std::pow(std::abs(det_aff),
                                           (static_cast<double>(n) - p) /
                                               (static_cast<double>(n) + p)) *
                                  ball_value;
                out.rows.push_back(with_p(
                    identity_row("bodies", bf.id + "/affine-covariance", r.value, expected,
                                 std::max(r.error_estimate, 1e-2 * expected / 3.0)),
                    p));
            }
        }
        if (K.kind != "polytope") {
            for (double p : {2.0}) {
                AspDualityReport rep = asp_duality_check(K, p, sc.spec);
                out.rows.push_back(
                    with_p(bound_row("bodies", bf.id + "/polar-duality", rep.residual,
                                     1e-2, 0.0),
                           p));
            }
            BodyIsoperimetricReport iso = lp_isoperimetric_check(K, 1.0, sc.spec);
            out.rows.push_back(with_p(
                bound_row("bodies", bf.id + "/isoperimetric", iso.ratio, iso.bound,
                          std::max(iso.combined_error, 1e-2 / 3.0)),
                1.0));
        }
        // Gauge/support polarity probe.
        {
            ConvexBody Kp = polar(K);
            Rng rng(sc.seed + 77);
            double worst = 0.0;
            for (int k = 0; k < 64; ++k) {
                Vec x = random_unit(n, rng) * 1.5;
                worst = std::max(worst, std::abs(K.gauge(x) - Kp.support(x)));
            }
            out.rows.push_back(
                bound_row("bodies", bf.id + "/gauge-polar-support", worst, 1e-8, 0.0));
        }
    }
    return out;
}

// ------------------------------------------------------------ theorem-norm

SuiteResult suite_theorem_norm(const Scenario& sc) {
    SuiteResult out;
    for (const auto& bf : sc.bodies) {
        if (bf.body.kind == "polytope") continue;
        for (double p : {0.0, 1.0, 2.0}) {
            BridgeReport rep = theorem_norm_check(bf.body, p, sc.spec);
            out.rows.push_back(
                with_p(bound_row("theorem-norm", bf.id, rep.residual, 1e-2, 0.0), p));
        }
    }
    return out;
}

// --------------------------------------------------------- sconcave-duality

SuiteResult suite_sconcave_duality(const Scenario& sc) {
    SuiteResult out;
    for (const auto& sf : sc.sprofiles) {
        const SConcaveFunction& fs = sf.fs;
        IntegrationSpec primal_spec = with_budget(sc.spec, fs.dim >= 2 ? 40000 : 60000);
        IntegrationSpec dual_spec = with_budget(sc.spec, fs.dim >= 2 ? 2000 : 8000);

        IntegrationResult mass = s_mass(fs, primal_spec);
        IntegrationResult as0 = as_lambda_s(0.0, fs, primal_spec);
        out.rows.push_back(with_s(
            with_lambda(identity_row("sconcave-duality", sf.id + "/endpoint-0", as0.value,
                                     mass.value,
                                     std::max(as0.error_estimate + mass.error_estimate,
                                              1e-7 * mass.value)),
                        0.0),
            fs.s));

        IntegrationResult as1 = as_lambda_s(1.0, fs, primal_spec);
        IntegrationResult dual1 = as_lambda_s_dual(0.0, fs, dual_spec);
        out.rows.push_back(with_s(
            with_lambda(identity_row("sconcave-duality", sf.id + "/endpoint-1", as1.value,
                                     dual1.value,
                                     std::max(as1.error_estimate + dual1.error_estimate,
                                              3e-4 * std::max(as1.value, dual1.value))),
                        1.0),
            fs.s));

        for (double lam : {0.25, 0.5, 0.75}) {
            IntegrationResult a = as_lambda_s(lam, fs, primal_spec);
            IntegrationResult b = as_lambda_s_dual(1.0 - lam, fs, dual_spec);
            double err = a.error_estimate + b.error_estimate +
                         3e-4 * std::max(a.value, b.value);
            out.rows.push_back(with_s(
                with_lambda(identity_row("sconcave-duality", sf.id, a.value, b.value, err),
                            lam),
                fs.s));
        }

        SHolderReport hold = holder_s_check(0.5, fs, primal_spec);
        out.rows.push_back(with_s(
            with_lambda(bound_row("sconcave-duality", sf.id + "/holder", hold.as_value,
                                  hold.bound,
                                  std::max(hold.combined_error, 1e-6 * hold.bound)),
                        0.5),
            fs.s));

        // Pointwise probes: implicit relation and transport-map round trip.
        {
            Rng rng(sc.seed + 3);
            std::uniform_real_distribution<double> u(-0.4, 0.4);
            double worst_impl = 0.0, worst_round = 0.0, worst_jac = 0.0;
            for (int k = 0; k < 8; ++k) {
                Vec y(fs.dim), x(fs.dim);
                for (int i = 0; i < fs.dim; ++i) {
                    y(i) = u(rng);
                    x(i) = u(rng);
                }
                worst_impl = std::max(worst_impl, implicit_relation_residual(fs, y));
                TMapValue tm = t_map(fs, x);
                Vec back = t_map_dual(fs, tm.y);
                worst_round = std::max(worst_round, (back - x).norm());
                // Jacobian against finite differences of the map itself.
                double h = 1e-5;
                Mat J(fs.dim, fs.dim);
                for (int j = 0; j < fs.dim; ++j) {
                    Vec xp = x, xm = x;
                    xp(j) += h;
                    xm(j) -= h;
                    J.col(j) = (t_map(fs, xp).y - t_map(fs, xm).y) / (2.0 * h);
                }
                worst_jac = std::max(worst_jac,
                                     std::abs(std::abs(J.determinant()) - tm.jacobian));
            }
            out.rows.push_back(with_s(
                bound_row("sconcave-duality", sf.id + "/implicit-relation", worst_impl,
                          1e-6, 0.0),
                fs.s));
            out.rows.push_back(with_s(bound_row("sconcave-duality", sf.id + "/t-roundtrip",
                                                worst_round, 1e-5, 0.0),
                                      fs.s));
            out.rows.push_back(with_s(bound_row("sconcave-duality", sf.id + "/t-jacobian",
                                                worst_jac, 1e-4, 0.0),
                                      fs.s));
        }
    }
    return out;
}

// ---------------------------------------------------------------- s-logsob

SuiteResult suite_s_logsob(const Scenario& sc) {
    SuiteResult out;
    for (const auto& sf : sc.sprofiles) {
        const SConcaveFunction& fs = sf.fs;
        if (fs.dim > 1) continue;  // desk-scale default; widen via scenario fixtures
        IntegrationSpec spec = with_budget(sc.spec, 60000);
        SLogSobReport rep = s_logsob_check(fs, spec);
        bool equality_family = fs.data && std::abs(fs.data->alpha - 0.5) < 1e-12;
        double err = std::max(rep.combined_error, 1e-4 * (1.0 + std::abs(rep.rhs)));
        if (equality_family)
            out.rows.push_back(with_s(
                identity_row("s-logsob", sf.id, rep.lhs, rep.rhs, std::max(err, 1e-3 / 3.0)),
                fs.s));
        else
            out.rows.push_back(with_s(bound_row("s-logsob", sf.id, rep.lhs, rep.rhs, err),
                                      fs.s));
        out.rows.push_back(with_s(
            bound_row("s-logsob", sf.id + "/santalo", rep.santalo_product,
                      rep.santalo_bound,
                      std::max(rep.combined_error, 1e-6 * rep.santalo_bound)),
            fs.s));
        out.rows.push_back(with_s(
            identity_row("s-logsob", sf.id + "/mass", rep.mass, 1.0, 1e-6), fs.s));
    }
    // s -> 0: the right-hand side approaches the log-concave limit.
    {
        QuadraticForm q = QuadraticForm::isotropic(1);
        LogConcaveMeasure mu = LogConcaveMeasure::make(q.oracle(), sc.spec);
        double target = 2.0 * (gaussian_entropy(1) - shannon_entropy(mu));
        std::vector<double> dist;
        for (double s : {0.5, 0.25, 0.125}) {
            SConcaveFunction fs = SConcaveFunction::profile_family(s, 1.0, q);
            SLogSobReport rep = s_logsob_check(fs, with_budget(sc.spec, 60000));
            dist.push_back(std::abs(rep.rhs - target));
        }
        out.rows.push_back(
            bound_row("s-logsob", "s-to-0/monotone-tail", dist[2], dist[1], 0.0));
    }
    return out;
}

// --------------------------------------------------------------- lift-body

SuiteResult suite_lift_body(const Scenario& sc) {
    SuiteResult out;
    std::vector<std::pair<std::string, SConcaveFunction>> fixtures;
    fixtures.emplace_back(
        "parabolic-s1", SConcaveFunction::profile_family(1.0, 1.0, QuadraticForm::isotropic(1)));
    fixtures.emplace_back("hemisphere-s1",
                          SConcaveFunction::equality_family(1.0, Mat::Identity(1, 1)));
    for (auto& [id, fs] : fixtures) {
        for (double lam : {0.0, 1.0 / 3.0}) {
            LiftReport rep = lift_body_check(fs, lam, with_budget(sc.spec, 30000));
            out.rows.push_back(with_s(
                with_p(with_lambda(bound_row("lift-body", id, rep.residual, 2e-2, 0.0), lam),
                       rep.p),
                fs.s));
        }
    }
    return out;
}

// --------------------------------------------------------------- valuation

SuiteResult suite_valuation(const Scenario& sc) {
    SuiteResult out;
    auto report = [&out](const std::string& id, double lambda, const ValuationReport& rep) {
        out.rows.push_back(with_lambda(
            identity_row("valuation", id, rep.lhs, rep.rhs,
                         std::max(4.0 / 3.0 * rep.combined_error, 1e-9 * rep.lhs)),
            lambda));
    };
    QuadraticForm iso = QuadraticForm::isotropic(1);
    ConvexFunctionOracle q = iso.oracle();
    report("identical", 0.5, valuation_check(q, q, 0.5, sc.spec));

    QuadraticForm lifted(iso.A, iso.center, 1.0);
    report("nested", 0.5, valuation_check(q, lifted.oracle(), 0.5, sc.spec));

    // Crossing pair: max with affine pieces active on disjoint regions.
    auto max_affine = [&](double a, double b) {
        ConvexFunctionOracle out_oracle;
        out_oracle.dim = 1;
        out_oracle.eval = [a, b](const Vec& x) {
            return std::max(0.5 * x(0) * x(0), a * x(0) + b);
        };
        out_oracle.bounding_box = Box::cube(1, 10.0);
        return out_oracle;
    };
    ConvexFunctionOracle psi1 = max_affine(2.0, -1.0);   // active on (2-sqrt2, 2+sqrt2)
    ConvexFunctionOracle psi2 = max_affine(-2.0, -1.0);  // mirror image
    report("crossing", 0.5, valuation_check(psi1, psi2, 0.5, sc.spec));
    return out;
}

}  // namespace

const std::vector<SuiteInfo>& suite_catalog() {
    static const std::vector<SuiteInfo> catalog = {
        {"legendre", "conjugacy identities: solver vs closed forms, grid biconjugation",
         suite_legendre},
        {"mccann", "gradient-map change of variables against the dual-side integral",
         suite_mccann},
        {"asa-duality",
         "surface-area duality, lambda-log-convexity, linear-map homogeneity",
         suite_asa_duality},
        {"isoperimetric", "surface-area upper/lower bounds with Gaussian equality cases",
         suite_isoperimetric},
        {"santalo", "mass-product bound, product form, minimizing translation",
         suite_santalo},
        {"rev-logsob", "concavity-side entropy bound with equality at Gaussians",
         suite_rev_logsob},
        {"logsob", "refined and weak entropy-information bounds", suite_logsob},
        {"bodies", "body surface areas: closed values, polarity, isoperimetry",
         suite_bodies},
        {"theorem-norm", "functional-to-body bridge at lambda = p/(n+p)",
         suite_theorem_norm},
        {"sconcave-duality", "s-concave duality, endpoints, transport-map identities",
         suite_sconcave_duality},
        {"s-logsob", "s-concave entropy bound with the extremal-profile equality case",
         suite_s_logsob},
        {"lift-body", "lifted-body identity linking profile and body surface areas",
         suite_lift_body},
        {"valuation", "inclusion-exclusion identity over min/max pairs", suite_valuation},
    };
    return catalog;
}

SuiteResult run_suites(const Scenario& scenario, std::vector<std::string> names, int jobs) {
    // gaussian-smoke: equality-case subset on quadratic fixtures only.
    bool smoke = false;
    for (const auto& n : names)
        if (n == "gaussian-smoke") smoke = true;
    Scenario effective = scenario;
    if (smoke) {
        names = {"asa-duality", "isoperimetric", "santalo", "rev-logsob", "logsob"};
        effective.oracles.clear();
        for (const auto& fx : scenario.oracles)
            if (fx.quadratic) effective.oracles.push_back(fx);
    }
    if (names.empty())
        for (const auto& info : suite_catalog()) names.push_back(info.name);

    std::vector<const SuiteInfo*> selected;
    for (const auto& name : names) {
        const SuiteInfo* found = nullptr;
        for (const auto& info : suite_catalog())
            if (info.name == name) found = &info;
        if (!found) throw ScenarioError("unknown suite '" + name + "'");
        selected.push_back(found);
    }

    std::vector<SuiteResult> results(selected.size());
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(selected.size())));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= selected.size()) return;
            results[i] = selected[i]->run(effective);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SuiteResult merged;
    for (auto& r : results) {
        merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
        merged.profiles.insert(merged.profiles.end(), r.profiles.begin(), r.profiles.end());
    }
    return merged;
}

}  // namespace fasa
