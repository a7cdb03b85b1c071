// stats.hpp — level-spacing statistics, Brody fits, adjacent-gap ratios and
// their Poisson/GOE reference curves; GOE reference-ensemble sampler.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcchaos/spectra.hpp"
#include "tcchaos/unfolding.hpp"

namespace tcc {

enum class Ensemble { poisson, goe };

inline std::vector<double> spacings(const UnfoldedSpectrum& unfolded) {
    const auto& v = unfolded.values;
    if (v.size() < 2) throw std::invalid_argument("spacings: need at least 2 levels");
    std::vector<double> s(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s[i] = v[i + 1] - v[i];
    return s;
}

inline double reference_spacing_pdf(Ensemble kind, double s) {
    if (s < 0.0) return 0.0;
    if (kind == Ensemble::poisson) return std::exp(-s);
    return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

inline double brody_eta(double b) {
    return std::pow(std::tgamma((b + 2.0) / (b + 1.0)), b + 1.0);
}

inline double brody_pdf(double b, double s) {
    if (b < 0.0) throw std::invalid_argument("brody_pdf: b must be >= 0");
    if (s < 0.0) return 0.0;
    const double eta = brody_eta(b);
    if (s == 0.0) return b == 0.0 ? (b + 1.0) * eta : 0.0;
    return (b + 1.0) * eta * std::pow(s, b) * std::exp(-eta * std::pow(s, b + 1.0));
}

// Exact inverse-CDF sampler for the Brody distribution.
inline std::vector<double> brody_sample(double b, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(std::numeric_limits<double>::min(), 1.0);
    const double eta = brody_eta(b);
    std::vector<double> out(count);
    for (auto& s : out) s = std::pow(-std::log(uni(rng)) / eta, 1.0 / (b + 1.0));
    return out;
}

enum class BrodyMethod { mle, histogram_lsq };

struct BrodyFit {
    double b = 0.0;
    double eta = 1.0;
    double objective = 0.0;  // negative log-likelihood or LSQ residual
    double b_stderr = 0.0;   // from observed information (MLE only)
    BrodyMethod method = BrodyMethod::mle;
    bool low_sample_warning = false;
};

namespace detail {

// Golden-section minimization of a unimodal scalar function on [a, c].
template <typename F>
inline double golden_minimize(F&& f, double a, double c, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - phi * (c - a);
    double x2 = a + phi * (c - a);
    double f1 = f(x1), f2 = f(x2);
    int iters = 0;
    while (c - a > tol) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - phi * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (c - a);
            f2 = f(x2);
        }
        if (++iters > 200) throw std::runtime_error("golden_minimize: no convergence");
    }
    return 0.5 * (a + c);
}

}  // namespace detail

inline BrodyFit fit_brody(const std::vector<double>& spacing_samples,
                          BrodyMethod method = BrodyMethod::mle) {
    if (spacing_samples.size() < 2) throw std::invalid_argument("fit_brody: too few spacings");
    BrodyFit fit;
    fit.method = method;
    fit.low_sample_warning = spacing_samples.size() < 200;

    if (method == BrodyMethod::mle) {
        auto nll = [&](double b) {
            const double eta = brody_eta(b);
            double ll = 0.0;
            for (double s : spacing_samples) {
                const double sp = std::max(s, 1e-300);
                ll += std::log(b + 1.0) + std::log(eta) + b * std::log(sp) -
                      eta * std::pow(sp, b + 1.0);
            }
            return -ll;
        };
        fit.b = detail::golden_minimize(nll, 0.0, 1.2, 1e-6);
        fit.objective = nll(fit.b);
        // Curvature of the negative log-likelihood at the optimum.
        const double h = 1e-4;
        const double bl = std::max(0.0, fit.b - h), br = std::min(1.2, fit.b + h);
        const double d2 = (nll(br) - 2.0 * nll(fit.b) + nll(bl)) / ((br - fit.b) * (fit.b - bl));
        fit.b_stderr = d2 > 0.0 ? 1.0 / std::sqrt(d2) : 0.0;
    } else {
        // Mirror of the paper-style histogram fit: 50 uniform bins on [0, 4].
        const int bins = 50;
        const double smax = 4.0;
        std::vector<double> dens(bins, 0.0);
        const double bw = smax / bins;
        std::size_t used = 0;
        for (double s : spacing_samples)
            if (s < smax) {
                dens[static_cast<std::size_t>(s / bw)] += 1.0;
                ++used;
            }
        for (auto& d : dens) d /= spacing_samples.size() * bw;
        auto lsq = [&](double b) {
            double r = 0.0;
            for (int k = 0; k < bins; ++k) {
                const double mid = (k + 0.5) * bw;
                const double d = dens[static_cast<std::size_t>(k)] - brody_pdf(b, mid);
                r += d * d;
            }
            return r;
        };
        (void)used;
        fit.b = detail::golden_minimize(lsq, 0.0, 1.2, 1e-6);
        fit.objective = lsq(fit.b);
    }
    fit.eta = brody_eta(fit.b);
    return fit;
}

struct GapRatioStats {
    std::vector<double> r_values;
    double mean_r = 0.0;
    double stderr_r = 0.0;
    std::size_t skipped_degenerate = 0;
};

// Adjacent-gap ratios of a raw (trimmed) spectrum; no unfolding involved.
inline GapRatioStats gap_ratios(const Spectrum& spec) {
    const auto& e = spec.values;
    if (e.size() < 3) throw std::invalid_argument("gap_ratios: need at least 3 levels");
    const double skip_tol = 1e-14 * spec.width();
    GapRatioStats out;
    out.r_values.reserve(e.size() - 2);
    for (std::size_t n = 0; n + 2 < e.size(); ++n) {
        const double d1 = e[n + 1] - e[n];
        const double d2 = e[n + 2] - e[n + 1];
        if (d1 < skip_tol && d2 < skip_tol) {
            ++out.skipped_degenerate;
            continue;
        }
        out.r_values.push_back(std::min(d1, d2) / std::max(d1, d2));
    }
    if (out.r_values.empty()) throw std::runtime_error("gap_ratios: all gaps degenerate");
    const double n = static_cast<double>(out.r_values.size());
    out.mean_r = std::accumulate(out.r_values.begin(), out.r_values.end(), 0.0) / n;
    double var = 0.0;
    for (double r : out.r_values) var += (r - out.mean_r) * (r - out.mean_r);
    out.stderr_r = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return out;
}

// Analytic P(r) on [0, 1]: 2 * Ptilde(r) * Theta(1 - r).
inline double reference_ratio_pdf(Ensemble kind, double r) {
    if (r < 0.0 || r > 1.0) return 0.0;
    if (kind == Ensemble::poisson) return 2.0 / ((1.0 + r) * (1.0 + r));
    const double z = 8.0 / 27.0;  // GOE normalization, Dyson beta = 1
    return (2.0 / z) * (r + r * r) / std::pow(1.0 + r + r * r, 2.5);
}

// Eigenvalues of a GOE-distributed symmetric matrix: independent Gaussian
// entries, variance 1 off-diagonal and 2 on the diagonal.
inline Spectrum goe_sample_spectrum(int dim, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("goe_sample_spectrum: dim must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SparseAccumulator acc(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            acc.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                    (i == j ? std::sqrt(2.0) : 1.0) * gauss(rng));
    auto m = acc.finalize("goe dim=" + std::to_string(dim) + " seed=" + std::to_string(seed));
    return diagonalize(m);
}

// Unit-rate Poisson-process levels, the integrable reference spectrum.
inline Spectrum poisson_sample_spectrum(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    Spectrum s;
    s.values.resize(count);
    double e = 0.0;
    for (auto& v : s.values) v = (e += expo(rng));
    s.provenance = "poisson levels count=" + std::to_string(count) +
                   " seed=" + std::to_string(seed);
    return s;
}

}  // namespace tcc
