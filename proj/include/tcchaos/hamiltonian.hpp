// hamiltonian.hpp — assembly of the Tavis-Cummings lattice Hamiltonian and
// the driven single-site impurity Hamiltonian over sector bases.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcchaos/basis.hpp"
#include "tcchaos/matrix.hpp"

namespace tcc {

// Matrix element of S^+/S^- between ladder states |m> and |m +/- 1>,
// total spin s = S/2, S^z eigenvalue m_z = m - S/2.
inline double spin_ladder_amplitude(int S, int m, bool raise) {
    if (m < 0 || m > S) return 0.0;
    const double s = 0.5 * S;
    const double mz = m - s;
    const double under = raise ? s * (s + 1) - mz * (mz + 1) : s * (s + 1) - mz * (mz - 1);
    return under > 0.0 ? std::sqrt(under) : 0.0;
}

namespace detail {

inline std::uint64_t basis_checksum(const SectorBasis& b) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) { h = (h ^ v) * 1099511628211ull; };
    mix(static_cast<std::uint64_t>(b.L));
    mix(static_cast<std::uint64_t>(b.S));
    mix(static_cast<std::uint64_t>(b.n_ex + 1));
    mix(static_cast<std::uint64_t>(b.parity));
    mix(b.dim());
    return h;
}

// Coefficient of the bare configuration c inside the symmetrized basis
// column that represents its reflection orbit. Returns {index, coeff}.
inline std::pair<std::size_t, double> orbit_component(const SectorBasis& b, const Config& c) {
    if (b.parity == Parity::none) {
        auto it = b.index.find(c);  // bare basis stores every configuration
        return it == b.index.end() ? std::pair<std::size_t, double>{0, 0.0}
                                   : std::pair<std::size_t, double>{it->second, 1.0};
    }
    Config r = reflect(c);
    const Config& rep = (r < c) ? r : c;
    auto it = b.index.find(rep);
    if (it == b.index.end()) return {0, 0.0};  // projected out of this sector
    const std::size_t k = it->second;
    const double w = b.weights[k];
    if (rep == r && !(rep == c)) {
        // c is the mirror partner of the stored representative
        return {k, b.parity == Parity::antisymmetric ? -w : w};
    }
    return {k, w};
}

// Applies one off-diagonal ket component c (with coefficient coeff) of
// column j: generates every H|c> term and scatters it onto the sector basis.
template <typename Emit>
inline void apply_lattice_terms(const SectorBasis& b, const Config& c, double coeff,
                                Emit&& emit) {
    const double g = b.lambda / std::sqrt(static_cast<double>(b.S));
    Config work = c;
    for (int i = 0; i < b.L; ++i) {
        // a_i^dag S_i^-  : (n, m) -> (n+1, m-1)
        if (c[i].m >= 1) {
            double amp = g * std::sqrt(c[i].n + 1.0) * spin_ladder_amplitude(b.S, c[i].m, false);
            work[i] = {c[i].n + 1, c[i].m - 1};
            emit(work, coeff * amp);
            work[i] = c[i];
        }
        // a_i S_i^+      : (n, m) -> (n-1, m+1)
        if (c[i].n >= 1 && c[i].m < b.S) {
            double amp = g * std::sqrt(static_cast<double>(c[i].n)) *
                         spin_ladder_amplitude(b.S, c[i].m, true);
            work[i] = {c[i].n - 1, c[i].m + 1};
            emit(work, coeff * amp);
            work[i] = c[i];
        }
    }
    // hopping -J/2 (a_i^dag a_{i+1} + a_{i+1}^dag a_i), open boundaries
    for (int i = 0; i + 1 < b.L; ++i) {
        if (c[i + 1].n >= 1) {
            double amp = -0.5 * b.J * std::sqrt((c[i].n + 1.0) * c[i + 1].n);
            work[i] = {c[i].n + 1, c[i].m};
            work[i + 1] = {c[i + 1].n - 1, c[i + 1].m};
            emit(work, coeff * amp);
            work[i] = c[i];
            work[i + 1] = c[i + 1];
        }
        if (c[i].n >= 1) {
            double amp = -0.5 * b.J * std::sqrt(c[i].n * (c[i + 1].n + 1.0));
            work[i] = {c[i].n - 1, c[i].m};
            work[i + 1] = {c[i + 1].n + 1, c[i + 1].m};
            emit(work, coeff * amp);
            work[i] = c[i];
            work[i + 1] = c[i + 1];
        }
    }
}

}  // namespace detail

inline double diagonal_energy(const SectorBasis& b, const Config& c) {
    double e = 0.0;
    for (const auto& s : c) e += b.omega_c * s.n + b.omega_s * (s.m - 0.5 * b.S);
    return e;
}

inline SymmetricSparseMatrix assemble_lattice_hamiltonian(const SectorBasis& b) {
    if (b.dim() == 0)
        throw std::invalid_argument("assemble_lattice_hamiltonian: empty basis");
    if (b.is_impurity())
        throw std::invalid_argument("assemble_lattice_hamiltonian: impurity basis given");
    SparseAccumulator acc(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) {
        const Config& rep = b.states[j];
        acc.add(j, j, diagonal_energy(b, rep));

        // Expand the symmetrized column into its bare components.
        std::vector<std::pair<Config, double>> components;
        components.emplace_back(rep, b.weights[j]);
        if (b.parity != Parity::none) {
            Config mir = reflect(rep);
            if (!(mir == rep))
                components.emplace_back(std::move(mir),
                                        b.parity == Parity::antisymmetric ? -b.weights[j]
                                                                          : b.weights[j]);
        }
        for (const auto& [cfg, coeff] : components) {
            detail::apply_lattice_terms(b, cfg, coeff, [&](const Config& out, double h) {
                auto [r, cv] = detail::orbit_component(b, out);
                if (cv == 0.0) return;
                if (r <= j) acc.add(r, j, h * cv);  // lower part comes from column r
            });
        }
    }
    return acc.finalize("H_lattice " + std::to_string(b.L) + "x S=" + std::to_string(b.S) +
                            " n_ex=" + std::to_string(b.n_ex) + " parity=" +
                            to_string(b.parity) + " lambda=" + std::to_string(b.lambda) +
                            " J=" + std::to_string(b.J),
                        detail::basis_checksum(b), 1e-15);
}

inline SymmetricSparseMatrix assemble_impurity_hamiltonian(const SectorBasis& b) {
    if (!b.is_impurity())
        throw std::invalid_argument("assemble_impurity_hamiltonian: lattice basis given");
    const int cutoff = b.impurity_cutoff;
    const double g = b.lambda / std::sqrt(static_cast<double>(b.S));
    const double drive = -b.mu * std::sqrt(static_cast<double>(b.S));
    SparseAccumulator acc(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) {
        const auto [n, m] = b.states[j][0];
        acc.add(j, j, b.omega_c * n + b.omega_s * (m - 0.5 * b.S));
        // a^dag S^-; transitions past the cutoff are dropped
        if (m >= 1 && n + 1 < cutoff) {
            double amp = g * std::sqrt(n + 1.0) * spin_ladder_amplitude(b.S, m, false);
            acc.add(j, b.index_of({LocalState{n + 1, m - 1}}), amp);
        }
        // drive -mu sqrt(S) (a + a^dag); only a^dag upward, a is its transpose
        if (n + 1 < cutoff)
            acc.add(j, b.index_of({LocalState{n + 1, m}}), drive * std::sqrt(n + 1.0));
    }
    return acc.finalize("H_impurity S=" + std::to_string(b.S) +
                            " lambda=" + std::to_string(b.lambda) +
                            " mu=" + std::to_string(b.mu) +
                            " n_cutoff=" + std::to_string(cutoff),
                        detail::basis_checksum(b), 1e-15);
}

// Diagonal matrix of total excitation counts n_i + m_i.
inline SymmetricSparseMatrix number_operator(const SectorBasis& b) {
    SparseAccumulator acc(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) {
        double tot = 0.0;
        for (const auto& s : b.states[j]) tot += s.n + s.m;
        acc.add(j, j, tot);
    }
    return acc.finalize("number_operator", detail::basis_checksum(b));
}

}  // namespace tcc
