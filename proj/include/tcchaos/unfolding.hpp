// unfolding.hpp — polynomial staircase fit mapping a raw spectrum to unit
// local mean spacing, plus density-of-states histograms.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcchaos/spectra.hpp"

namespace tcc {

// Smoothed cumulative level counting function. The fit is done in a Chebyshev
// basis on the spectrum rescaled to [-1, 1]; raw degree-12 monomials would be
// badly conditioned.
struct StaircaseFit {
    std::vector<double> coeffs;  // Chebyshev coefficients c_0 .. c_degree
    int degree = 0;
    double e_min = 0.0, e_max = 1.0;

    double to_x(double e) const { return 2.0 * (e - e_min) / (e_max - e_min) - 1.0; }

    double operator()(double e) const {
        const double x = to_x(e);
        double tkm1 = 1.0, tk = x, val = coeffs[0];
        if (degree >= 1) val += coeffs[1] * x;
        for (int k = 2; k <= degree; ++k) {
            double tkp1 = 2.0 * x * tk - tkm1;
            val += coeffs[static_cast<std::size_t>(k)] * tkp1;
            tkm1 = tk;
            tk = tkp1;
        }
        return val;
    }

    double derivative(double e) const {
        // d/dx T_k = k U_{k-1}
        const double x = to_x(e);
        double ukm1 = 1.0, uk = 2.0 * x, d = 0.0;
        if (degree >= 1) d += coeffs[1] * 1.0 * ukm1;
        if (degree >= 2) d += coeffs[2] * 2.0 * uk;
        for (int k = 3; k <= degree; ++k) {
            double ukp1 = 2.0 * x * uk - ukm1;
            d += coeffs[static_cast<std::size_t>(k)] * k * ukp1;
            ukm1 = uk;
            uk = ukp1;
        }
        return d * 2.0 / (e_max - e_min);
    }
};

struct UnfoldedSpectrum {
    std::vector<double> values;
    StaircaseFit fit;
    double residual = 0.0;  // RMS deviation of the staircase fit
};

// Count of eigenvalues <= E (Theta(0) = 1 convention).
inline std::size_t staircase(const Spectrum& spec, double e) {
    return static_cast<std::size_t>(
        std::upper_bound(spec.values.begin(), spec.values.end(), e) - spec.values.begin());
}

inline UnfoldedSpectrum unfold(const Spectrum& spec, int degree = 12) {
    const std::size_t n = spec.size();
    if (degree < 1) throw std::invalid_argument("unfold: degree must be >= 1");
    if (n <= static_cast<std::size_t>(degree) + 1)
        throw std::invalid_argument("unfold: need more levels than fit coefficients");
    StaircaseFit fit;
    fit.degree = degree;
    fit.e_min = spec.values.front();
    fit.e_max = spec.values.back();
    if (!(fit.e_max > fit.e_min)) throw std::invalid_argument("unfold: degenerate spectrum range");

    // Staircase sampled at the eigenvalues, target n - 1/2 (jump midpoint).
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), degree + 1);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = fit.to_x(spec.values[i]);
        double tkm1 = 1.0, tk = x;
        A(static_cast<Eigen::Index>(i), 0) = 1.0;
        if (degree >= 1) A(static_cast<Eigen::Index>(i), 1) = x;
        for (int k = 2; k <= degree; ++k) {
            double tkp1 = 2.0 * x * tk - tkm1;
            A(static_cast<Eigen::Index>(i), k) = tkp1;
            tkm1 = tk;
            tk = tkp1;
        }
        y(static_cast<Eigen::Index>(i)) = static_cast<double>(i) + 0.5;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < 1e12)) throw std::runtime_error("unfold: ill-conditioned staircase fit");
    Eigen::VectorXd c = svd.solve(y);
    fit.coeffs.assign(c.data(), c.data() + c.size());

    // Monotonicity guard on a 10N grid over the spectrum's range.
    const std::size_t grid = 10 * n;
    for (std::size_t g = 0; g <= grid; ++g) {
        const double e = fit.e_min + (fit.e_max - fit.e_min) * g / grid;
        if (fit.derivative(e) < 0.0)
            throw std::runtime_error("unfold: fitted staircase is non-monotone");
    }

    UnfoldedSpectrum out;
    out.fit = fit;
    out.values.resize(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = fit(spec.values[i]);
        const double d = out.values[i] - y(static_cast<Eigen::Index>(i));
        ss += d * d;
    }
    out.residual = std::sqrt(ss / n);

    const double mean_spacing = (out.values.back() - out.values.front()) / (n - 1);
    if (std::abs(mean_spacing - 1.0) > 0.02)
        throw std::runtime_error("unfold: mean spacing deviates from 1 by more than 2%");
    return out;
}

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<double> counts;  // size bins

    double total() const {
        double t = 0.0;
        for (double c : counts) t += c;
        return t;
    }
};

// Uniform-bin counts over [min, max]; the last bin is right-closed.
inline Histogram dos_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("dos_histogram: bins must be >= 1");
    if (values.empty()) throw std::invalid_argument("dos_histogram: empty input");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.counts.assign(static_cast<std::size_t>(bins), 0.0);
    const double lo = *mn, hi = *mx;
    const double w = (hi > lo) ? (hi - lo) / bins : 1.0;
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + w * b;
    for (double v : values) {
        auto b = static_cast<std::ptrdiff_t>((v - lo) / w);
        b = std::clamp<std::ptrdiff_t>(b, 0, bins - 1);
        h.counts[static_cast<std::size_t>(b)] += 1.0;
    }
    return h;
}

}  // namespace tcc
