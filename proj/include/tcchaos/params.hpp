// params.hpp — model parameter bundles for the Tavis-Cummings lattice and
// the driven single-site impurity.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcc {

struct LatticeParams {
    int L = 3;             // chain length (open boundary conditions)
    int S = 8;             // two-level systems per site; total spin S/2
    double lambda = 1.0;   // spin-boson coupling
    double J = 0.0;        // boson hopping amplitude
    double omega_c = 1.0;  // cavity mode energy
    double omega_s = 1.0;  // spin splitting

    void validate() const {
        if (L < 1) throw std::invalid_argument("LatticeParams: L must be >= 1");
        if (S < 1) throw std::invalid_argument("LatticeParams: S must be >= 1");
        if (J < 0.0) throw std::invalid_argument("LatticeParams: J must be >= 0");
        if (!(std::isfinite(lambda) && std::isfinite(J) &&
              std::isfinite(omega_c) && std::isfinite(omega_s)))
            throw std::invalid_argument("LatticeParams: non-finite parameter");
    }

    std::string snapshot() const {
        return "lattice L=" + std::to_string(L) + " S=" + std::to_string(S) +
               " lambda=" + std::to_string(lambda) + " J=" + std::to_string(J) +
               " omega_c=" + std::to_string(omega_c) +
               " omega_s=" + std::to_string(omega_s);
    }
};

struct ImpurityParams {
    int S = 64;            // spin count; total spin S/2
    double lambda = 1.0;   // spin-boson coupling
    double mu = 0.0;       // coherent drive amplitude, normalized >= 0
    double omega_c = 1.0;
    double omega_s = 1.0;
    int n_cutoff = 1024;   // boson occupations kept: 0 .. n_cutoff-1

    void validate() const {
        if (S < 1) throw std::invalid_argument("ImpurityParams: S must be >= 1");
        if (n_cutoff < 1)
            throw std::invalid_argument("ImpurityParams: n_cutoff must be >= 1");
        if (mu < 0.0)
            throw std::invalid_argument(
                "ImpurityParams: mu must be >= 0 (negative mu is gauge-equivalent)");
        if (!(std::isfinite(lambda) && std::isfinite(mu) &&
              std::isfinite(omega_c) && std::isfinite(omega_s)))
            throw std::invalid_argument("ImpurityParams: non-finite parameter");
    }

    std::string snapshot() const {
        return "impurity S=" + std::to_string(S) +
               " lambda=" + std::to_string(lambda) + " mu=" + std::to_string(mu) +
               " omega_c=" + std::to_string(omega_c) +
               " omega_s=" + std::to_string(omega_s) +
               " n_cutoff=" + std::to_string(n_cutoff);
    }
};

}  // namespace tcc
