#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "tcchaos/hamiltonian.hpp"
#include "tcchaos/spectra.hpp"

using namespace tcc;

namespace {

SymmetricSparseMatrix from_dense(const Eigen::MatrixXd& M) {
    SparseAccumulator acc(static_cast<std::size_t>(M.rows()));
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = r; c < M.cols(); ++c)
            if (M(r, c) != 0.0)
                acc.add(static_cast<std::size_t>(r), static_cast<std::size_t>(c), M(r, c));
    return acc.finalize("dense test matrix");
}

}  // namespace

TEST_CASE("diagonalize agrees with Eigen on a random symmetric matrix") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    const int n = 60;
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) M(r, c) = M(c, r) = g(rng);
    auto spec = diagonalize(from_dense(M));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    REQUIRE(spec.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        CHECK(spec.values[static_cast<std::size_t>(k)] ==
              Catch::Approx(es.eigenvalues()(k)).margin(1e-10));
}

TEST_CASE("diagonalize returns an ascending spectrum with matching trace") {
    LatticeParams p;
    p.L = 2;
    p.S = 3;
    p.lambda = 1.0;
    p.J = 0.4;
    auto H = assemble_lattice_hamiltonian(build_sector_basis(p, 5, Parity::symmetric));
    auto spec = diagonalize(H);
    REQUIRE(spec.size() == H.dim);
    CHECK(std::is_sorted(spec.values.begin(), spec.values.end()));
    double sum = 0.0;
    for (double v : spec.values) sum += v;
    CHECK(sum == Catch::Approx(H.trace()).margin(1e-9));
    CHECK_FALSE(spec.provenance.empty());
}

TEST_CASE("diagonal matrix eigenvalues are its entries") {
    SparseAccumulator acc(3);
    acc.add(0, 0, 2.0);
    acc.add(1, 1, -1.0);
    acc.add(2, 2, 0.5);
    auto spec = diagonalize(acc.finalize());
    CHECK(spec.values == std::vector<double>{-1.0, 0.5, 2.0});
}

TEST_CASE("trim_spectrum drops floor-counted fractions from each end") {
    Spectrum s;
    for (int k = 0; k < 10; ++k) s.values.push_back(k);
    auto t = trim_spectrum(s, 0.25, 0.10);  // drop 2 low, 1 high
    REQUIRE(t.size() == 7);
    CHECK(t.values.front() == 2.0);
    CHECK(t.values.back() == 8.0);

    // floor semantics: 0.19 * 10 -> 1
    auto u = trim_spectrum(s, 0.19, 0.0);
    CHECK(u.size() == 9);
    CHECK(u.values.front() == 1.0);

    auto same = trim_spectrum(s, 0.0, 0.0);
    CHECK(same.values == s.values);
}

TEST_CASE("trim_spectrum rejects bad fractions") {
    Spectrum s;
    s.values = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(trim_spectrum(s, -0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(trim_spectrum(s, 0.6, 0.4), std::invalid_argument);
}

TEST_CASE("impurity trimming order: upper half first, then lowest tenth") {
    Spectrum s;
    for (int k = 0; k < 100; ++k) s.values.push_back(k);
    auto kept = trim_spectrum(trim_spectrum(s, 0.0, 0.5), 0.1, 0.0);
    REQUIRE(kept.size() == 45);
    CHECK(kept.values.front() == 5.0);  // 10% of the remaining 50, not of 100
    CHECK(kept.values.back() == 49.0);
}

TEST_CASE("spectrum CSV round-trips at full precision") {
    Spectrum s;
    s.provenance = "roundtrip check";
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 257; ++k) s.values.push_back(u(rng));
    std::sort(s.values.begin(), s.values.end());
    std::stringstream ss;
    write_spectrum_csv(s, ss);
    auto back = read_spectrum_csv(ss);
    REQUIRE(back.size() == s.size());
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(back.values[k] == s.values[k]);
    CHECK(back.provenance.find("roundtrip check") != std::string::npos);
}

TEST_CASE("empty matrix is rejected") {
    SymmetricSparseMatrix m;
    CHECK_THROWS_AS(diagonalize(m), std::invalid_argument);
}
