// spectra.hpp — dense symmetric diagonalization (LAPACK) and the spectrum
// trimming rules, plus spectrum CSV round-trip.

#pragma once

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcchaos/io.hpp"
#include "tcchaos/matrix.hpp"

namespace tcc {

struct Spectrum {
    std::vector<double> values;  // ascending
    std::string provenance;

    std::size_t size() const { return values.size(); }
    double width() const {
        return values.empty() ? 0.0 : values.back() - values.front();
    }
};

namespace detail {

// Eigenvalue-only solve; for modest sizes also computes vectors and verifies
// sampled residuals against the input matrix.
inline std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& M, bool with_residual_check,
                                             double scale) {
    const lapack_int n = static_cast<lapack_int>(M.rows());
    Eigen::MatrixXd A = M;  // overwritten by LAPACK
    std::vector<double> w(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_residual_check ? 'V' : 'N', 'U',
                                     n, A.data(), n, w.data());
    if (info != 0)
        throw std::runtime_error("diagonalize: LAPACK dsyevd failed, info=" +
                                 std::to_string(info));
    if (with_residual_check) {
        const double tol = 1e-10 * std::max(scale, 1.0);
        const std::size_t samples = std::min<std::size_t>(8, static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < samples; ++k) {
            const auto idx = static_cast<Eigen::Index>(k * static_cast<std::size_t>(n) / samples);
            const double res = (M * A.col(idx) - w[static_cast<std::size_t>(idx)] * A.col(idx))
                                   .norm();
            if (res > tol)
                throw std::runtime_error("diagonalize: residual check failed: " +
                                         std::to_string(res));
        }
    }
    return w;
}

}  // namespace detail

inline Spectrum diagonalize(const SymmetricSparseMatrix& m) {
    if (m.dim < 1) throw std::invalid_argument("diagonalize: empty matrix");
    Eigen::MatrixXd M = m.to_dense();
    // Residual spot-checks need eigenvectors; restrict them to sizes where the
    // extra cost is negligible. Larger solves are guarded by the trace check.
    const bool check = m.dim <= 1024;
    Spectrum s;
    s.values = detail::dense_eigenvalues(M, check, M.cwiseAbs().maxCoeff() * m.dim);
    std::sort(s.values.begin(), s.values.end());
    double sum = 0.0;
    for (double v : s.values) {
        if (!std::isfinite(v)) throw std::runtime_error("diagonalize: non-finite eigenvalue");
        sum += v;
    }
    const double tr = m.trace();
    const double denom = std::max(1.0, std::abs(tr) + M.cwiseAbs().maxCoeff() * m.dim);
    if (std::abs(sum - tr) > 1e-10 * denom)
        throw std::runtime_error("diagonalize: trace mismatch");
    s.provenance = m.params_snapshot;
    return s;
}

// Drops floor(frac * N) eigenvalues from each end.
inline Spectrum trim_spectrum(const Spectrum& spec, double drop_low_frac,
                              double drop_high_frac) {
    if (drop_low_frac < 0.0 || drop_high_frac < 0.0 ||
        drop_low_frac + drop_high_frac >= 1.0)
        throw std::invalid_argument("trim_spectrum: invalid fractions");
    const std::size_t n = spec.size();
    const auto lo = static_cast<std::size_t>(std::floor(drop_low_frac * n));
    const auto hi = static_cast<std::size_t>(std::floor(drop_high_frac * n));
    if (lo + hi >= n) throw std::runtime_error("trim_spectrum: result would be empty");
    Spectrum out;
    out.values.assign(spec.values.begin() + static_cast<std::ptrdiff_t>(lo),
                      spec.values.end() - static_cast<std::ptrdiff_t>(hi));
    out.provenance = spec.provenance + " | trim low=" + std::to_string(drop_low_frac) +
                     " high=" + std::to_string(drop_high_frac);
    return out;
}

inline void write_spectrum_csv(const Spectrum& s, std::ostream& os) {
    os << "# " << s.provenance << "\n";
    os << "eigenvalue\n";
    for (double v : s.values) os << io::format_full(v) << "\n";
}

inline Spectrum read_spectrum_csv(std::istream& is) {
    Spectrum s;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            s.provenance += (s.provenance.empty() ? "" : " ") + line.substr(2);
            continue;
        }
        if (line == "eigenvalue") continue;
        s.values.push_back(std::stod(line));
    }
    if (!std::is_sorted(s.values.begin(), s.values.end()))
        std::sort(s.values.begin(), s.values.end());
    return s;
}

}  // namespace tcc
