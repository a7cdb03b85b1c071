#include <catch_amalgamated.hpp>

#include "tcchaos/basis.hpp"

using namespace tcc;

namespace {

// Independent odometer-style enumeration over the unconstrained product space
// (n_i <= n_ex, m_i <= S), counting configurations and reflection orbits.
struct OracleCount {
    std::size_t full = 0, symmetric = 0, antisymmetric = 0;
};

OracleCount oracle_count(int L, int S, int n_ex) {
    OracleCount out;
    std::vector<int> digits(static_cast<std::size_t>(2 * L), 0);  // n1,m1,n2,m2,...
    auto limit = [&](std::size_t d) { return d % 2 == 0 ? n_ex : S; };
    while (true) {
        int total = 0;
        for (int v : digits) total += v;
        if (total == n_ex) {
            ++out.full;
            std::vector<int> mirror(digits.size());
            for (int site = 0; site < L; ++site) {
                mirror[static_cast<std::size_t>(2 * site)] =
                    digits[static_cast<std::size_t>(2 * (L - 1 - site))];
                mirror[static_cast<std::size_t>(2 * site + 1)] =
                    digits[static_cast<std::size_t>(2 * (L - 1 - site) + 1)];
            }
            if (mirror == digits)
                ++out.symmetric;  // palindromes appear only in the symmetric sector
            else if (digits < mirror) {
                ++out.symmetric;
                ++out.antisymmetric;
            }
        }
        std::size_t d = 0;
        while (d < digits.size() && digits[d] == limit(d)) digits[d++] = 0;
        if (d == digits.size()) break;
        ++digits[d];
    }
    return out;
}

}  // namespace

TEST_CASE("sector_dimension matches brute-force enumeration") {
    for (int L = 1; L <= 3; ++L)
        for (int S = 1; S <= 4; ++S)
            for (int n_ex = 0; n_ex <= 8; ++n_ex) {
                LatticeParams p;
                p.L = L;
                p.S = S;
                auto oracle = oracle_count(L, S, n_ex);
                CAPTURE(L, S, n_ex);
                CHECK(sector_dimension(p, n_ex, Parity::none) == oracle.full);
                CHECK(sector_dimension(p, n_ex, Parity::symmetric) == oracle.symmetric);
                CHECK(sector_dimension(p, n_ex, Parity::antisymmetric) == oracle.antisymmetric);
            }
}

TEST_CASE("sector_dimension small examples") {
    LatticeParams p;
    p.L = 1;
    p.S = 4;
    CHECK(sector_dimension(p, 0, Parity::none) == 1);  // vacuum only
    p.S = 2;
    CHECK(sector_dimension(p, 2, Parity::none) == 3);  // (2,0),(1,1),(0,2)
}

TEST_CASE("paper-scale symmetric sector dimension agrees with oracle") {
    LatticeParams p;
    p.L = 3;
    p.S = 8;
    const int n_ex = 36;
    auto oracle = oracle_count(p.L, p.S, n_ex);
    CHECK(sector_dimension(p, n_ex, Parity::symmetric) == oracle.symmetric);
    CHECK(oracle.symmetric + oracle.antisymmetric == oracle.full);
}

TEST_CASE("parity sector dimensions decompose the full sector") {
    LatticeParams p;
    p.L = 3;
    p.S = 3;
    for (int n_ex = 0; n_ex <= 6; ++n_ex)
        CHECK(sector_dimension(p, n_ex, Parity::symmetric) +
                  sector_dimension(p, n_ex, Parity::antisymmetric) ==
              sector_dimension(p, n_ex, Parity::none));
}

TEST_CASE("cumulative dimension over n_ex matches counting all configurations") {
    LatticeParams p;
    p.L = 2;
    p.S = 2;
    const int N = 5;
    std::size_t total = 0;
    for (int n_ex = 0; n_ex <= N; ++n_ex) total += sector_dimension(p, n_ex, Parity::none);
    std::size_t oracle = 0;
    for (int n_ex = 0; n_ex <= N; ++n_ex) oracle += oracle_count(p.L, p.S, n_ex).full;
    CHECK(total == oracle);
}

TEST_CASE("build_sector_basis canonical order and weights") {
    LatticeParams p;
    p.L = 1;
    p.S = 2;
    auto b = build_sector_basis(p, 1, Parity::none);
    REQUIRE(b.dim() == 2);
    CHECK(b.states[0] == Config{LocalState{0, 1}});  // lexicographic on (n, m)
    CHECK(b.states[1] == Config{LocalState{1, 0}});

    p.L = 2;
    p.S = 1;
    auto sym = build_sector_basis(p, 1, Parity::symmetric);
    REQUIRE(sym.dim() == 2);
    for (std::size_t k = 0; k < sym.dim(); ++k) {
        CHECK(sym.weights[k] == Catch::Approx(1.0 / std::sqrt(2.0)));
        CHECK(sym.states[k] <= reflect(sym.states[k]));  // lexicographic orbit minimum
    }

    auto anti = build_sector_basis(p, 0, Parity::antisymmetric);
    CHECK(anti.dim() == 0);  // vacuum is palindromic
}

TEST_CASE("index round-trips for every state") {
    LatticeParams p;
    p.L = 3;
    p.S = 2;
    for (auto parity : {Parity::none, Parity::symmetric, Parity::antisymmetric}) {
        auto b = build_sector_basis(p, 4, parity);
        for (std::size_t k = 0; k < b.dim(); ++k) CHECK(b.index_of(b.states[k]) == k);
    }
}

TEST_CASE("palindromic states get weight 1 in the symmetric sector") {
    LatticeParams p;
    p.L = 2;
    p.S = 2;
    auto b = build_sector_basis(p, 2, Parity::symmetric);
    for (std::size_t k = 0; k < b.dim(); ++k) {
        const bool pal = reflect(b.states[k]) == b.states[k];
        CHECK(b.weights[k] == Catch::Approx(pal ? 1.0 : 1.0 / std::sqrt(2.0)));
    }
}

TEST_CASE("capacity budget is enforced") {
    LatticeParams p;
    p.L = 3;
    p.S = 8;
    CHECK_THROWS_AS(build_sector_basis(p, 36, Parity::none, 1000), CapacityError);
}

TEST_CASE("impurity basis dimensions and ordering") {
    ImpurityParams p;
    p.S = 1;
    p.n_cutoff = 2;
    CHECK(build_impurity_basis(p).dim() == 4);

    p.S = 64;
    p.n_cutoff = 1024;
    auto big = build_impurity_basis(p);
    CHECK(big.dim() == 66560);

    p.S = 2;
    p.n_cutoff = 3;
    auto b = build_impurity_basis(p);
    REQUIRE(b.dim() == 9);
    std::size_t k = 0;
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m <= 2; ++m) CHECK(b.states[k++] == Config{LocalState{n, m}});
}

TEST_CASE("invalid parameters are rejected") {
    LatticeParams p;
    p.L = 0;
    CHECK_THROWS_AS(sector_dimension(p, 1, Parity::none), std::invalid_argument);
    ImpurityParams ip;
    ip.mu = -0.5;
    CHECK_THROWS_AS(build_impurity_basis(ip), std::invalid_argument);
    ip.mu = 0.0;
    ip.n_cutoff = 0;
    CHECK_THROWS_AS(build_impurity_basis(ip), std::invalid_argument);
}
