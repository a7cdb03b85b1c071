#include <catch_amalgamated.hpp>

#include "tcchaos/stats.hpp"
#include "tcchaos/unfolding.hpp"

using namespace tcc;

TEST_CASE("staircase counts levels at and below the query point") {
    Spectrum s;
    s.values = {0.0, 1.0, 1.0, 2.5};
    CHECK(staircase(s, -0.5) == 0);
    CHECK(staircase(s, 0.0) == 1);  // Theta(0) = 1
    CHECK(staircase(s, 1.0) == 3);
    CHECK(staircase(s, 2.0) == 3);
    CHECK(staircase(s, 3.0) == 4);
}

TEST_CASE("equally spaced levels unfold onto the integer lattice") {
    Spectrum s;
    for (int k = 0; k < 200; ++k) s.values.push_back(3.0 + 0.25 * k);
    auto u = unfold(s, 1);
    for (std::size_t k = 0; k < u.values.size(); ++k)
        CHECK(u.values[k] == Catch::Approx(k + 0.5).margin(1e-9));
    CHECK(u.residual < 1e-9);
    // the fitted density is flat at 1/spacing
    for (double e : {3.0, 20.0, 50.0})
        CHECK(u.fit.derivative(e) == Catch::Approx(4.0).margin(1e-9));
}

TEST_CASE("unfolded spectrum has unit mean spacing") {
    auto spec = goe_sample_spectrum(600, 11);
    auto u = unfold(spec, 12);
    const double mean = (u.values.back() - u.values.front()) / (u.values.size() - 1);
    CHECK(mean == Catch::Approx(1.0).margin(0.02));
    CHECK(std::is_sorted(u.values.begin(), u.values.end()));
}

TEST_CASE("unfolding flattens the semicircle density in the bulk") {
    auto spec = goe_sample_spectrum(1000, 3);
    auto u = unfold(spec, 12);
    // local mean spacing over 50-level windows in the middle 80%
    const std::size_t n = u.values.size();
    for (std::size_t start = n / 10; start + 50 < n - n / 10; start += 50) {
        const double local = (u.values[start + 50] - u.values[start]) / 50.0;
        CHECK(local == Catch::Approx(1.0).margin(0.10));
    }
}

TEST_CASE("unfolding Poisson levels keeps spacing statistics Poissonian") {
    auto spec = poisson_sample_spectrum(4000, 19);
    auto sp = spacings(unfold(spec, 12));
    double mean = 0.0;
    for (double s : sp) mean += s;
    mean /= static_cast<double>(sp.size());
    CHECK(mean == Catch::Approx(1.0).margin(0.02));
    auto fit = fit_brody(sp);
    CHECK(fit.b < 0.05);
}

TEST_CASE("fit degree 10 vs 14 barely moves the Brody exponent") {
    auto spec = goe_sample_spectrum(1200, 5);
    auto b10 = fit_brody(spacings(unfold(spec, 10))).b;
    auto b14 = fit_brody(spacings(unfold(spec, 14))).b;
    CHECK(std::abs(b10 - b14) < 0.05);
}

TEST_CASE("unfold validates its input") {
    Spectrum s;
    for (int k = 0; k < 10; ++k) s.values.push_back(k);
    CHECK_THROWS_AS(unfold(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(unfold(s, 12), std::invalid_argument);  // too few levels

    Spectrum flat;
    flat.values.assign(40, 1.0);
    CHECK_THROWS_AS(unfold(flat, 2), std::invalid_argument);  // zero range
}

TEST_CASE("dos_histogram bins cover the range and count every value") {
    std::vector<double> v = {0.0, 0.1, 0.5, 0.9, 1.0};
    auto h = dos_histogram(v, 4);
    REQUIRE(h.edges.size() == 5);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(h.total() == 5.0);
    CHECK(h.counts == std::vector<double>{2.0, 0.0, 1.0, 2.0});  // last bin right-closed
    CHECK_THROWS_AS(dos_histogram(v, 0), std::invalid_argument);
    CHECK_THROWS_AS(dos_histogram(std::vector<double>{}, 4), std::invalid_argument);
}

TEST_CASE("unfolded density of states is approximately uniform") {
    auto spec = goe_sample_spectrum(1000, 23);
    auto u = unfold(spec, 12);
    auto h = dos_histogram(u.values, 10);
    const double expected = u.values.size() / 10.0;
    // drop the edge bins, which carry the trimming artifacts of the fit
    for (std::size_t k = 1; k + 1 < h.counts.size(); ++k)
        CHECK(h.counts[k] == Catch::Approx(expected).epsilon(0.12));
}
