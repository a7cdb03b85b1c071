#include <catch_amalgamated.hpp>

#include <cmath>

#include "tcchaos/crossover.hpp"

using namespace tcc;

namespace {

// Synthetic diagnostic curve y = g(control * S^exponent) with given grid.
DiagnosticCurve synthetic_curve(int S, double exponent, const std::vector<double>& controls,
                                double (*g)(double)) {
    DiagnosticCurve c;
    c.S = S;
    c.model = "synthetic";
    for (double x : controls) {
        DiagnosticPoint pt;
        pt.control = x;
        pt.b = pt.mean_r = g(x * std::pow(S, exponent));
        pt.b_err = pt.r_err = 0.01;
        pt.ok = true;
        c.points.push_back(pt);
    }
    return c;
}

double soft_step(double u) { return std::tanh(u); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("isotonic fit projects onto non-decreasing sequences") {
    CHECK(isotonic_fit({1.0, 2.0, 3.0}) == std::vector<double>{1.0, 2.0, 3.0});
    auto v = isotonic_fit({3.0, 1.0});  // pooled to the common mean
    CHECK(v == std::vector<double>{2.0, 2.0});
    auto w = isotonic_fit({1.0, 3.0, 2.0, 4.0});
    CHECK(std::is_sorted(w.begin(), w.end()));
    CHECK(w[1] == Catch::Approx(2.5));
    CHECK(w[2] == Catch::Approx(2.5));
    // total sum is preserved by least-squares pooling
    double s = 0.0;
    for (double x : w) s += x;
    CHECK(s == Catch::Approx(10.0));
}

TEST_CASE("pchip interpolates the nodes and stays within data range") {
    std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
    std::vector<double> y = {0.0, 0.1, 0.9, 1.0};
    PchipInterpolant f(x, y);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(f(x[k]) == Catch::Approx(y[k]));
    for (double q = 0.0; q <= 3.0; q += 0.01) {
        CHECK(f(q) >= 0.0);
        CHECK(f(q) <= 1.0);
    }
    // monotone data give a monotone interpolant
    double prev = f(0.0);
    for (double q = 0.01; q <= 3.0; q += 0.01) {
        CHECK(f(q) >= prev - 1e-12);
        prev = f(q);
    }
    CHECK(f(-5.0) == Catch::Approx(y.front()));  // clamped
    CHECK(f(9.0) == Catch::Approx(y.back()));
    CHECK_THROWS_AS(PchipInterpolant({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PchipInterpolant({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("identical curves collapse with zero score at any exponent") {
    auto grid = linspace(0.05, 3.0, 40);
    auto a = synthetic_curve(4, 0.25, grid, soft_step);
    auto b = a;
    for (double ex : {0.0, 0.25, 0.75}) CHECK(collapse_check({a, b}, ex) < 1e-14);
}

TEST_CASE("collapse score is minimized at the generating exponent") {
    auto grid = linspace(0.05, 3.0, 60);
    std::vector<DiagnosticCurve> curves;
    for (int S : {2, 4, 8}) curves.push_back(synthetic_curve(S, 0.25, grid, soft_step));
    double best_ex = -1.0, best = 1e300;
    for (double ex : {0.0, 0.125, 0.25, 0.5}) {
        const double score = collapse_check(curves, ex);
        if (score < best) {
            best = score;
            best_ex = ex;
        }
    }
    CHECK(best_ex == Catch::Approx(0.25));
    CHECK(collapse_check(curves, 0.0) > 2.0 * collapse_check(curves, 0.25));
}

TEST_CASE("collapse_check input validation") {
    auto grid = linspace(0.1, 1.0, 10);
    auto a = synthetic_curve(2, 0.25, grid, soft_step);
    CHECK_THROWS_AS(collapse_check({a}, 0.25), std::invalid_argument);
    // wildly different S with a large exponent pushes ranges apart
    auto b = synthetic_curve(4096, 0.25, linspace(100.0, 200.0, 10), soft_step);
    CHECK_THROWS_AS(collapse_check({a, b}, 3.0), std::runtime_error);
}

TEST_CASE("map extraction recovers the analytic parameter relation") {
    // f1(x) = tanh(x), f2(y) = tanh(2y)  =>  mu = (J/lambda) / 2
    DiagnosticCurve lat, imp;
    lat.model = "lattice";
    imp.model = "impurity";
    lat.S = imp.S = 1;  // no rescaling involved in extract_map
    for (double x : linspace(0.01, 2.5, 120)) {
        DiagnosticPoint p;
        p.control = x;
        p.b = p.mean_r = std::tanh(x);
        p.b_err = p.r_err = 0.0;
        p.ok = true;
        lat.points.push_back(p);
    }
    for (double y : linspace(0.01, 1.6, 120)) {
        DiagnosticPoint p;
        p.control = y;
        p.b = p.mean_r = std::tanh(2.0 * y);
        p.b_err = p.r_err = 0.0;
        p.ok = true;
        imp.points.push_back(p);
    }
    for (bool use_b : {false, true}) {
        auto map = extract_map(lat, imp, use_b);
        REQUIRE(map.mu.size() == map.j_over_lambda.size());
        CHECK(map.used_b == use_b);
        for (std::size_t k = 0; k < map.mu.size(); ++k) {
            // keep away from the window edges, where clamping bites
            if (map.j_over_lambda[k] < 0.1 || map.j_over_lambda[k] > 2.0) continue;
            CHECK(map.mu[k] == Catch::Approx(map.j_over_lambda[k] / 2.0).margin(1e-3));
        }
    }
}

TEST_CASE("identity map from identical curves") {
    DiagnosticCurve a;
    a.S = 1;
    for (double x : linspace(0.01, 2.0, 80)) {
        DiagnosticPoint p;
        p.control = x;
        p.b = p.mean_r = std::tanh(1.3 * x);
        p.ok = true;
        a.points.push_back(p);
    }
    auto map = extract_map(a, a, false);
    for (std::size_t k = 0; k < map.mu.size(); ++k)
        CHECK(map.mu[k] == Catch::Approx(map.j_over_lambda[k]).margin(1e-6));
}

TEST_CASE("map is invariant under reparametrizing the sweep grids") {
    DiagnosticCurve lat1, lat2, imp;
    lat1.S = lat2.S = imp.S = 1;
    auto add = [](DiagnosticCurve& c, double x, double v) {
        DiagnosticPoint p;
        p.control = x;
        p.b = p.mean_r = v;
        p.ok = true;
        c.points.push_back(p);
    };
    for (double x : linspace(0.01, 2.5, 90)) add(lat1, x, std::tanh(x));
    // a denser, unevenly spaced sampling of the same underlying function
    for (double u : linspace(0.1, std::sqrt(2.5), 150)) add(lat2, u * u, std::tanh(u * u));
    for (double y : linspace(0.01, 1.8, 90)) add(imp, y, std::tanh(2.0 * y));
    auto m1 = extract_map(lat1, imp, false);
    auto m2 = extract_map(lat2, imp, false);
    PchipInterpolant f2map(m2.j_over_lambda, m2.mu);
    for (std::size_t k = 0; k < m1.mu.size(); ++k) {
        const double x = m1.j_over_lambda[k];
        if (x < 0.2 || x > 1.8) continue;
        CHECK(m1.mu[k] == Catch::Approx(f2map(x)).margin(2e-3));
    }
}

TEST_CASE("error bands widen where the impurity curve is flat") {
    DiagnosticCurve lat, imp;
    lat.S = imp.S = 1;
    auto add = [](DiagnosticCurve& c, double x, double v, double err) {
        DiagnosticPoint p;
        p.control = x;
        p.b = p.mean_r = v;
        p.b_err = p.r_err = err;
        p.ok = true;
        c.points.push_back(p);
    };
    for (double x : linspace(0.01, 2.0, 60)) add(lat, x, std::tanh(x), 0.005);
    for (double y : linspace(0.01, 4.0, 60)) add(imp, y, std::tanh(0.8 * y), 0.005);
    auto map = extract_map(lat, imp, false);
    double early_band = 0.0, late_band = 0.0;
    const std::size_t n = map.mu.size();
    for (std::size_t k = 0; k < n / 4; ++k)
        early_band += map.band_high[k] - map.band_low[k];
    for (std::size_t k = 3 * n / 4; k < n; ++k)
        late_band += map.band_high[k] - map.band_low[k];
    // near saturation f2' -> 0, so propagated bands must blow up
    CHECK(late_band > early_band);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(map.band_low[k] <= map.mu[k]);
        CHECK(map.band_high[k] >= map.mu[k]);
    }
}

TEST_CASE("monotone window rejects flat or unordered diagnostics") {
    DiagnosticCurve flat;
    flat.S = 1;
    for (double x : linspace(0.1, 1.0, 20)) {
        DiagnosticPoint p;
        p.control = x;
        p.b = p.mean_r = 0.5;
        p.ok = true;
        flat.points.push_back(p);
    }
    CHECK_THROWS_AS(extract_map(flat, flat, false), std::runtime_error);
}

TEST_CASE("sweep options and grids are validated") {
    LatticeParams lp;
    lp.L = 2;
    lp.S = 2;
    CHECK_THROWS_AS(sweep_lattice(lp, 3, Parity::symmetric, {}), std::invalid_argument);
    ImpurityParams ip;
    CHECK_THROWS_AS(sweep_impurity(ip, {0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_impurity(ip, {}), std::invalid_argument);
}

TEST_CASE("small lattice sweep produces rising gap-ratio diagnostics") {
    LatticeParams lp;
    lp.L = 3;
    lp.S = 2;
    lp.lambda = 1.0;
    SweepOptions opt;
    opt.trim_low = 0.05;
    opt.trim_high = 0.05;
    opt.unfold_degree = 6;  // only ~300 levels at this size
    auto curve = sweep_lattice(lp, 8, Parity::symmetric, {0.02, 1.0}, opt);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.model == "lattice");
    CHECK(curve.scaling == ScalingTag::s_quarter);
    for (const auto& p : curve.points) {
        CHECK(p.ok);
        CHECK(p.n_levels > 100);
    }
    // chaos grows with hopping even at this tiny scale
    CHECK(curve.points[1].mean_r > curve.points[0].mean_r);
}

TEST_CASE("failed sweep points are reported, not thrown") {
    LatticeParams lp;
    lp.L = 3;
    lp.S = 2;
    SweepOptions opt;
    opt.dim_budget = 10;  // force a capacity error inside the point
    auto curve = sweep_lattice(lp, 8, Parity::symmetric, {0.5}, opt);
    REQUIRE(curve.points.size() == 1);
    CHECK_FALSE(curve.points[0].ok);
    CHECK_FALSE(curve.points[0].error.empty());
    CHECK(curve.controls().empty());
}

TEST_CASE("worker pool gives the same sweep as serial execution") {
    LatticeParams lp;
    lp.L = 2;
    lp.S = 2;
    SweepOptions serial, parallel;
    serial.workers = 1;
    parallel.workers = 3;
    auto a = sweep_lattice(lp, 6, Parity::symmetric, {0.1, 0.5, 1.0}, serial);
    auto b = sweep_lattice(lp, 6, Parity::symmetric, {0.1, 0.5, 1.0}, parallel);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(a.points[k].mean_r == b.points[k].mean_r);
        CHECK(a.points[k].b == b.points[k].b);
    }
}
