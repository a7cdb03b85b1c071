// sff.hpp — block-averaged spectral form factor and the analytic GOE and
// Poisson reference curves.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tcchaos/unfolding.hpp"

namespace tcc {

struct SffCurve {
    std::vector<double> times;       // strictly increasing, > 0
    std::vector<double> values;      // measured K(t)
    std::vector<double> std_error;   // standard error over blocks
    std::vector<double> goe_ref;     // analytic references on the same grid
    std::vector<double> poisson_ref;
    std::size_t block_size = 0;
    std::size_t n_blocks = 0;
};

inline std::vector<double> log_time_grid(double t_min = 1e-2, double t_max = 1e2,
                                         std::size_t points = 400) {
    if (!(t_min > 0.0 && t_max > t_min) || points < 2)
        throw std::invalid_argument("log_time_grid: invalid grid");
    std::vector<double> t(points);
    const double lmin = std::log(t_min), lmax = std::log(t_max);
    for (std::size_t i = 0; i < points; ++i)
        t[i] = std::exp(lmin + (lmax - lmin) * i / (points - 1));
    return t;
}

// GOE SFF, asymptotic large-N form: Bessel slope term plus the piecewise
// ramp/plateau term with branch split at t = 2 pi.
inline double sff_goe_reference(int block_size, double t) {
    if (t <= 0.0) throw std::invalid_argument("sff_goe_reference: t must be > 0");
    const double pi = std::numbers::pi;
    const double bessel = (pi / t) * std::cyl_bessel_j(1, 2.0 * block_size * t / pi);
    double ramp;
    if (t < 2.0 * pi)
        ramp = t / pi - (t / (2.0 * pi)) * std::log1p(t / pi);
    else
        ramp = 2.0 - (t / (2.0 * pi)) * std::log((t + pi) / (t - pi));
    return bessel * bessel + block_size * ramp;
}

// Poisson SFF for N unit-mean-spacing levels; complex powers evaluated in
// polar form on the principal branch.
inline double sff_poisson_reference(int block_size, double t) {
    if (t <= 0.0) throw std::invalid_argument("sff_poisson_reference: t must be > 0");
    const double n = block_size;
    const double r = std::sqrt(1.0 + t * t);
    const double theta = std::atan(t);
    const double decay = 2.0 * std::pow(r, 1.0 - n) * std::cos((1.0 - n) * theta);
    return n + (2.0 - decay) / (t * t);
}

// K(t) averaged over disjoint consecutive blocks of the unfolded spectrum;
// leftover levels past the last full block are dropped.
inline SffCurve sff(const UnfoldedSpectrum& unfolded, std::size_t block_size,
                    std::vector<double> times = log_time_grid()) {
    const auto& e = unfolded.values;
    if (block_size < 1) throw std::invalid_argument("sff: block_size must be >= 1");
    if (e.size() < block_size)
        throw std::invalid_argument("sff: fewer levels than one block");
    SffCurve curve;
    curve.block_size = block_size;
    curve.n_blocks = e.size() / block_size;
    curve.times = std::move(times);
    curve.values.resize(curve.times.size());
    curve.std_error.resize(curve.times.size());
    curve.goe_ref.resize(curve.times.size());
    curve.poisson_ref.resize(curve.times.size());

    std::vector<double> block_k(curve.n_blocks);
    for (std::size_t ti = 0; ti < curve.times.size(); ++ti) {
        const double t = curve.times[ti];
        double mean = 0.0;
        for (std::size_t b = 0; b < curve.n_blocks; ++b) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < block_size; ++k) {
                const double phase = e[b * block_size + k] * t;
                re += std::cos(phase);
                im += std::sin(phase);
            }
            block_k[b] = re * re + im * im;
            mean += block_k[b];
        }
        mean /= static_cast<double>(curve.n_blocks);
        double var = 0.0;
        for (double k : block_k) var += (k - mean) * (k - mean);
        curve.values[ti] = mean;
        curve.std_error[ti] =
            curve.n_blocks > 1
                ? std::sqrt(var / (curve.n_blocks - 1.0) / curve.n_blocks)
                : 0.0;
        curve.goe_ref[ti] = sff_goe_reference(static_cast<int>(block_size), t);
        curve.poisson_ref[ti] = sff_poisson_reference(static_cast<int>(block_size), t);
    }
    return curve;
}

}  // namespace tcc
