#include "fasa/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fasa {

namespace {

using nlohmann::json;

Mat parse_matrix(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty())
        throw ScenarioError("fixture key '" + key + "' must be a nonempty matrix");
    const int n = static_cast<int>(j.size());
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
            throw ScenarioError("fixture key '" + key + "' must be square");
        for (int c = 0; c < n; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

Vec parse_vector(const json& j, const std::string& key) {
    if (!j.is_array()) throw ScenarioError("fixture key '" + key + "' must be an array");
    Vec v(static_cast<long>(j.size()));
    for (long i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

ConvexFunctionOracle abs_oracle_1d() {
    ConvexFunctionOracle out;
    out.dim = 1;
    out.eval = [](const Vec& x) { return std::abs(x(0)); };
    out.bounding_box = Box::cube(1, kLogTailCutoff * 1.05);
    return out;
}

void parse_fixture(const json& j, Scenario& sc) {
    if (!j.contains("kind")) throw ScenarioError("fixture missing key 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    std::string id = j.value("id", kind);
    if (kind == "quadratic") {
        Mat A = parse_matrix(j.at("matrix"), "matrix");
        Vec center = j.contains("center") ? parse_vector(j.at("center"), "center")
                                          : Vec(Vec::Zero(A.rows()));
        double offset = j.value("offset", 0.0);
        QuadraticForm q(A, center, offset);
        OracleFixture fx;
        fx.id = id;
        fx.quadratic = q;
        fx.oracle = q.oracle();
        fx.smooth = true;
        fx.even = center.norm() < 1e-12;
        sc.oracles.push_back(std::move(fx));
    } else if (kind == "smooth_family") {
        int dim = j.value("dim", 2);
        std::uint64_t seed = j.value("seed", sc.seed);
        OracleFixture fx;
        fx.id = id;
        fx.oracle = SmoothConvexFamily::random(dim, seed).oracle();
        fx.smooth = true;
        sc.oracles.push_back(std::move(fx));
    } else if (kind == "abs") {
        OracleFixture fx;
        fx.id = id;
        fx.oracle = abs_oracle_1d();
        fx.smooth = false;
        fx.even = true;
        sc.oracles.push_back(std::move(fx));
    } else if (kind == "gauge_squared" || kind == "body") {
        std::string shape = j.value("shape", std::string("ball"));
        ConvexBody body;
        if (shape == "ball") {
            body = make_ball(j.value("dim", 2));
        } else if (shape == "ellipsoid") {
            body = make_ellipsoid(parse_matrix(j.at("matrix"), "matrix"));
        } else if (shape == "pball") {
            body = make_pball(j.value("dim", 2), j.value("q", 4.0));
        } else if (shape == "cube") {
            body = make_cube(j.value("dim", 2));
        } else if (shape == "cross") {
            body = make_cross_polytope(j.value("dim", 2));
        } else {
            throw ScenarioError("unknown body shape '" + shape + "'");
        }
        if (kind == "body") {
            sc.bodies.push_back({id, std::move(body)});
        } else {
            OracleFixture fx;
            fx.id = id;
            fx.oracle = body.gauge_squared_oracle();
            fx.smooth = body.smooth_positive_curvature;
            fx.even = true;
            sc.oracles.push_back(std::move(fx));
        }
    } else if (kind == "s_profile") {
        double s = j.value("s", 0.5);
        double alpha = j.value("alpha", 1.0);
        Mat Q = j.contains("matrix") ? parse_matrix(j.at("matrix"), "matrix")
                                     : Mat(Mat::Identity(j.value("dim", 1), j.value("dim", 1)));
        SFixture fx;
        fx.id = id;
        if (j.value("equality", false))
            fx.fs = SConcaveFunction::equality_family(s, Q);
        else
            fx.fs = SConcaveFunction::profile_family(
                s, alpha, QuadraticForm(Q, Vec::Zero(Q.rows()), 0.0), j.value("scale", 1.0));
        sc.sprofiles.push_back(std::move(fx));
    } else if (kind == "custom_grid") {
        std::vector<Vec> axes;
        for (const auto& ax : j.at("axes")) axes.push_back(parse_vector(ax, "axes"));
        std::vector<double> values;
        for (const auto& v : j.at("values")) {
            if (v.is_string())
                values.push_back(v.get<std::string>() == "inf" ? kInf : -kInf);
            else
                values.push_back(v.get<double>());
        }
        OracleFixture fx;
        fx.id = id;
        fx.oracle = grid_oracle(axes, values);
        fx.smooth = false;
        sc.oracles.push_back(std::move(fx));
    } else {
        throw ScenarioError("unknown fixture kind '" + kind + "'");
    }
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    Scenario sc;
    if (!doc.contains("seed")) throw ScenarioError("scenario missing mandatory key 'seed'");
    sc.seed = doc.at("seed").get<std::uint64_t>();
    sc.spec.seed = sc.seed;
    if (doc.contains("suites")) {
        for (const auto& s : doc.at("suites")) sc.suites.push_back(s.get<std::string>());
    }
    if (doc.contains("fixtures")) {
        for (const auto& f : doc.at("fixtures")) parse_fixture(f, sc);
    } else {
        Scenario base = builtin(sc.seed);
        sc.oracles = std::move(base.oracles);
        sc.bodies = std::move(base.bodies);
        sc.sprofiles = std::move(base.sprofiles);
    }
    if (doc.contains("integration")) {
        const auto& integ = doc.at("integration");
        if (integ.contains("method")) {
            std::string m = integ.at("method").get<std::string>();
            if (m == "lattice")
                sc.spec.method = Method::lattice;
            else if (m == "adaptive")
                sc.spec.method = Method::adaptive;
            else if (m == "monte_carlo")
                sc.spec.method = Method::monte_carlo;
            else if (m == "importance")
                sc.spec.method = Method::importance;
            else
                throw ScenarioError("unknown integration method '" + m + "'");
        }
        sc.spec.budget = integ.value("budget", sc.spec.budget);
        sc.spec.rel_tol = integ.value("rel_tol", sc.spec.rel_tol);
        try {
            sc.spec.validate();
        } catch (const Error& e) {
            throw ScenarioError(std::string("integration: ") + e.what());
        }
    }
    if (doc.contains("lambda_grid")) {
        if (doc.at("lambda_grid").is_string())
            sc.lambda_grid = parse_lambda_grid(doc.at("lambda_grid").get<std::string>());
        else
            for (const auto& l : doc.at("lambda_grid"))
                sc.lambda_grid.push_back(l.get<double>());
    }
    if (doc.contains("output")) {
        sc.out_dir = doc.at("output").value("dir", sc.out_dir);
        sc.timestamp = doc.at("output").value("timestamp", true);
    }
    sc.jobs = doc.value("jobs", 0);
    return sc;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

Scenario Scenario::builtin(std::uint64_t seed) {
    Scenario sc;
    sc.seed = seed;
    sc.spec.seed = seed;

    auto add_quadratic = [&sc](std::string id, const QuadraticForm& q) {
        OracleFixture fx;
        fx.id = std::move(id);
        fx.quadratic = q;
        fx.oracle = q.oracle();
        fx.smooth = true;
        fx.even = q.center.norm() < 1e-12;
        sc.oracles.push_back(std::move(fx));
    };
    add_quadratic("gauss-iso-1d", QuadraticForm::isotropic(1));
    add_quadratic("gauss-iso-2d", QuadraticForm::isotropic(2));
    Mat diag14 = Mat::Zero(2, 2);
    diag14(0, 0) = 1.0;
    diag14(1, 1) = 4.0;
    add_quadratic("gauss-diag14", QuadraticForm(diag14, Vec::Zero(2), 0.0));
    {
        Rng rng(seed + 17);
        add_quadratic("gauss-rand-2d",
                      QuadraticForm(random_spd(2, rng), Vec::Zero(2), 0.0));
    }

    for (int k = 0; k < 2; ++k) {
        OracleFixture fx;
        fx.id = "smooth-1d-" + std::string(1, char('a' + k));
        fx.oracle = SmoothConvexFamily::random(1, seed + 100 + k).oracle();
        sc.oracles.push_back(std::move(fx));
    }
    for (int k = 0; k < 2; ++k) {
        OracleFixture fx;
        fx.id = "smooth-2d-" + std::string(1, char('a' + k));
        fx.oracle = SmoothConvexFamily::random(2, seed + 200 + k).oracle();
        sc.oracles.push_back(std::move(fx));
    }
    {
        OracleFixture fx;
        fx.id = "abs-1d";
        fx.oracle = abs_oracle_1d();
        fx.smooth = false;
        fx.even = true;
        sc.oracles.push_back(std::move(fx));
    }

    sc.bodies.push_back({"ball-2", make_ball(2)});
    sc.bodies.push_back({"ball-3", make_ball(3)});
    Mat ell = Mat::Zero(2, 2);
    ell(0, 0) = 1.0;
    ell(1, 1) = 0.25;  // semi-axes 1 and 2
    sc.bodies.push_back({"ellipse-12", make_ellipsoid(ell)});
    sc.bodies.push_back({"pball-4", make_pball(2, 4.0)});
    sc.bodies.push_back({"cube-2", make_cube(2)});

    sc.sprofiles.push_back(
        {"sprof-1d-a1-s05",
         SConcaveFunction::profile_family(0.5, 1.0, QuadraticForm::isotropic(1))});
    sc.sprofiles.push_back(
        {"sprof-1d-a1-s1",
         SConcaveFunction::profile_family(1.0, 1.0, QuadraticForm::isotropic(1))});
    sc.sprofiles.push_back(
        {"sprof-1d-eq-s05", SConcaveFunction::equality_family(0.5, Mat::Identity(1, 1))});
    sc.sprofiles.push_back(
        {"sprof-2d-a1-s05",
         SConcaveFunction::profile_family(0.5, 1.0, QuadraticForm::isotropic(2))});
    return sc;
}

std::vector<double> parse_lambda_grid(const std::string& grid) {
    double a = 0.0, b = 0.0;
    long k = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(grid);
    if (!(ss >> a >> c1 >> b >> c2 >> k) || c1 != ':' || c2 != ':' || k < 1)
        throw ScenarioError("lambda grid must have the form a:b:k");
    std::vector<double> out;
    if (k == 1) {
        out.push_back(0.5 * (a + b));
        return out;
    }
    for (long i = 0; i < k; ++i)
        out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
    return out;
}

}  // namespace fasa
