// basis.hpp — occupation-number bases for fixed-excitation, fixed-parity
// sectors of the lattice model and the truncated impurity product basis.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tcchaos/params.hpp"

namespace tcc {

// One site: boson occupation n and spin excitation index m in [0, S].
// The S^z eigenvalue is m - S/2.
struct LocalState {
    int n = 0;
    int m = 0;
    friend bool operator==(const LocalState&, const LocalState&) = default;
    friend auto operator<=>(const LocalState&, const LocalState&) = default;
};

using Config = std::vector<LocalState>;

inline Config reflect(const Config& c) {
    return Config(c.rbegin(), c.rend());
}

enum class Parity { none, symmetric, antisymmetric };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::none: return "none";
        case Parity::symmetric: return "symmetric";
        case Parity::antisymmetric: return "antisymmetric";
    }
    return "?";
}

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const {
        std::size_t h = 1469598103934665603ull;  // FNV-1a
        for (const auto& s : c) {
            h = (h ^ static_cast<std::size_t>(s.n)) * 1099511628211ull;
            h = (h ^ static_cast<std::size_t>(s.m)) * 1099511628211ull;
        }
        return h;
    }
};

// Ordered basis of one Hilbert-space sector. For parity sectors each stored
// configuration is the lexicographic minimum of its reflection orbit and
// weights carry the symmetrization normalization (1/sqrt(2) for states whose
// mirror image differs, 1 for palindromes).
struct SectorBasis {
    int L = 1;
    int S = 1;
    int n_ex = -1;  // -1 for the impurity product basis
    Parity parity = Parity::none;
    int impurity_cutoff = 0;  // > 0 iff this is an impurity basis
    double omega_c = 1.0, omega_s = 1.0, lambda = 0.0, J = 0.0, mu = 0.0;

    std::vector<Config> states;
    std::vector<double> weights;
    std::unordered_map<Config, std::size_t, ConfigHash> index;

    std::size_t dim() const { return states.size(); }
    bool is_impurity() const { return impurity_cutoff > 0; }

    std::size_t index_of(const Config& c) const {
        auto it = index.find(c);
        if (it == index.end())
            throw std::out_of_range("SectorBasis: configuration not in sector");
        return it->second;
    }
    bool contains(const Config& c) const { return index.count(c) != 0; }
};

namespace detail {

// Visit every L-site configuration with total excitation n + m summing to
// n_ex, in lexicographic order of the flattened (n1, m1, ..., nL, mL) tuple.
inline void enumerate_sector(int L, int S, int n_ex,
                             const std::function<void(const Config&)>& visit) {
    Config cfg(static_cast<std::size_t>(L));
    std::function<void(int, int)> rec = [&](int site, int remaining) {
        if (site == L - 1) {
            for (int n = 0; n <= remaining; ++n) {
                int m = remaining - n;
                if (m > S) continue;
                cfg[site] = {n, m};
                visit(cfg);
            }
            return;
        }
        for (int n = 0; n <= remaining; ++n)
            for (int m = 0; m <= std::min(S, remaining - n); ++m) {
                cfg[site] = {n, m};
                rec(site + 1, remaining - n - m);
            }
    };
    if (n_ex >= 0) rec(0, n_ex);
}

}  // namespace detail

inline constexpr std::size_t kDefaultDimBudget = 4'000'000;

inline std::size_t sector_dimension(const LatticeParams& p, int n_ex, Parity parity) {
    p.validate();
    if (n_ex < 0) throw std::invalid_argument("sector_dimension: n_ex must be >= 0");
    std::size_t count = 0;
    detail::enumerate_sector(p.L, p.S, n_ex, [&](const Config& c) {
        switch (parity) {
            case Parity::none:
                ++count;
                break;
            case Parity::symmetric:
                if (!(reflect(c) < c)) ++count;  // orbit representative or palindrome
                break;
            case Parity::antisymmetric:
                if (c < reflect(c)) ++count;  // palindromes project out
                break;
        }
    });
    return count;
}

inline SectorBasis build_sector_basis(const LatticeParams& p, int n_ex, Parity parity,
                                      std::size_t dim_budget = kDefaultDimBudget) {
    p.validate();
    if (n_ex < 0) throw std::invalid_argument("build_sector_basis: n_ex must be >= 0");
    SectorBasis b;
    b.L = p.L;
    b.S = p.S;
    b.n_ex = n_ex;
    b.parity = parity;
    b.omega_c = p.omega_c;
    b.omega_s = p.omega_s;
    b.lambda = p.lambda;
    b.J = p.J;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    detail::enumerate_sector(p.L, p.S, n_ex, [&](const Config& c) {
        Config r = reflect(c);
        bool palindrome = (r == c);
        switch (parity) {
            case Parity::none:
                b.states.push_back(c);
                b.weights.push_back(1.0);
                break;
            case Parity::symmetric:
                if (r < c) return;
                b.states.push_back(c);
                b.weights.push_back(palindrome ? 1.0 : inv_sqrt2);
                break;
            case Parity::antisymmetric:
                if (!(c < r)) return;
                b.states.push_back(c);
                b.weights.push_back(inv_sqrt2);
                break;
        }
        if (b.states.size() > dim_budget)
            throw CapacityError("build_sector_basis: dimension exceeds budget of " +
                                std::to_string(dim_budget));
    });
    b.index.reserve(b.states.size());
    for (std::size_t k = 0; k < b.states.size(); ++k) b.index.emplace(b.states[k], k);
    return b;
}

// Truncated product basis (n, m) with n in [0, n_cutoff) and m in [0, S],
// lexicographic. No symmetry projection: the drive breaks U(1).
inline SectorBasis build_impurity_basis(const ImpurityParams& p,
                                        std::size_t dim_budget = kDefaultDimBudget) {
    p.validate();
    const std::size_t dim =
        static_cast<std::size_t>(p.n_cutoff) * static_cast<std::size_t>(p.S + 1);
    if (dim > dim_budget)
        throw CapacityError("build_impurity_basis: dimension " + std::to_string(dim) +
                            " exceeds budget of " + std::to_string(dim_budget));
    SectorBasis b;
    b.L = 1;
    b.S = p.S;
    b.n_ex = -1;
    b.parity = Parity::none;
    b.impurity_cutoff = p.n_cutoff;
    b.omega_c = p.omega_c;
    b.omega_s = p.omega_s;
    b.lambda = p.lambda;
    b.mu = p.mu;
    b.states.reserve(dim);
    b.weights.assign(dim, 1.0);
    for (int n = 0; n < p.n_cutoff; ++n)
        for (int m = 0; m <= p.S; ++m) b.states.push_back({LocalState{n, m}});
    b.index.reserve(dim);
    for (std::size_t k = 0; k < b.states.size(); ++k) b.index.emplace(b.states[k], k);
    return b;
}

// CSV dump: site-resolved occupations, symmetrization weight, index.
inline void dump_basis_csv(const SectorBasis& b, std::ostream& os) {
    for (int i = 0; i < b.L; ++i) os << "n" << i + 1 << ",m" << i + 1 << ",";
    os << "weight,index\n";
    for (std::size_t k = 0; k < b.states.size(); ++k) {
        for (const auto& s : b.states[k]) os << s.n << "," << s.m << ",";
        os << b.weights[k] << "," << k << "\n";
    }
}

}  // namespace tcc
