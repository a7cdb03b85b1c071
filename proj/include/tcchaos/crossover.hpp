// crossover.hpp — diagnostic sweeps b(J/lambda), <r>(J/lambda), b(mu),
// <r>(mu); dynamic-scaling collapse; extraction of the lattice-impurity map
// by eliminating the shared diagnostic.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcchaos/hamiltonian.hpp"
#include "tcchaos/stats.hpp"

namespace tcc {

enum class ScalingTag { none, s_quarter, s_three_quarters };

inline double scaling_exponent(ScalingTag tag) {
    switch (tag) {
        case ScalingTag::none: return 0.0;
        case ScalingTag::s_quarter: return 0.25;
        case ScalingTag::s_three_quarters: return 0.75;
    }
    return 0.0;
}

struct DiagnosticPoint {
    double control = 0.0;  // J/lambda or mu
    double b = 0.0, b_err = 0.0;
    double mean_r = 0.0, r_err = 0.0;
    std::size_t n_levels = 0;
    bool ok = false;
    std::string error;
};

struct DiagnosticCurve {
    std::vector<DiagnosticPoint> points;  // control strictly increasing
    ScalingTag scaling = ScalingTag::none;
    int S = 0;
    std::string model;  // "lattice" | "impurity"

    std::vector<double> controls(bool scaled = false) const {
        std::vector<double> c;
        const double ex = scaling_exponent(scaling);
        for (const auto& p : points)
            if (p.ok) c.push_back(scaled ? p.control * std::pow(S, ex) : p.control);
        return c;
    }
    std::vector<double> diagnostic(bool use_b) const {
        std::vector<double> d;
        for (const auto& p : points)
            if (p.ok) d.push_back(use_b ? p.b : p.mean_r);
        return d;
    }
    std::vector<double> diagnostic_err(bool use_b) const {
        std::vector<double> d;
        for (const auto& p : points)
            if (p.ok) d.push_back(use_b ? p.b_err : p.r_err);
        return d;
    }
};

struct SweepOptions {
    double trim_low = 0.0;
    double trim_high = 0.0;
    int unfold_degree = 12;
    BrodyMethod brody_method = BrodyMethod::mle;
    int workers = 1;
    std::size_t dim_budget = kDefaultDimBudget;
};

namespace detail {

// Shared per-point pipeline: spectrum -> trim -> gap ratios (raw) and
// unfold -> Brody fit.
inline DiagnosticPoint diagnose_spectrum(double control, Spectrum spec,
                                         const SweepOptions& opt) {
    DiagnosticPoint pt;
    pt.control = control;
    try {
        if (opt.trim_low > 0.0 || opt.trim_high > 0.0)
            spec = trim_spectrum(spec, opt.trim_low, opt.trim_high);
        pt.n_levels = spec.size();
        auto ratios = gap_ratios(spec);
        pt.mean_r = ratios.mean_r;
        pt.r_err = ratios.stderr_r;
        auto unfolded = unfold(spec, opt.unfold_degree);
        auto fit = fit_brody(spacings(unfolded), opt.brody_method);
        pt.b = fit.b;
        pt.b_err = fit.b_stderr;
        pt.ok = true;
    } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
    }
    return pt;
}

template <typename PointFn>
inline std::vector<DiagnosticPoint> run_points(const std::vector<double>& grid,
                                               int workers, PointFn&& fn) {
    std::vector<DiagnosticPoint> pts(grid.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = fn(grid[i]);
        return pts;
    }
    std::vector<std::future<DiagnosticPoint>> futs;
    std::size_t next = 0;
    while (next < grid.size()) {
        futs.clear();
        for (int w = 0; w < workers && next < grid.size(); ++w, ++next)
            futs.push_back(std::async(std::launch::async, fn, grid[next]));
        for (std::size_t k = 0; k < futs.size(); ++k)
            pts[next - futs.size() + k] = futs[k].get();
    }
    return pts;
}

}  // namespace detail

inline DiagnosticCurve sweep_lattice(LatticeParams base, int n_ex, Parity parity,
                                     const std::vector<double>& j_over_lambda_grid,
                                     const SweepOptions& opt = {}) {
    if (j_over_lambda_grid.empty()) throw std::invalid_argument("sweep_lattice: empty grid");
    DiagnosticCurve curve;
    curve.model = "lattice";
    curve.S = base.S;
    curve.scaling = ScalingTag::s_quarter;
    curve.points = detail::run_points(j_over_lambda_grid, opt.workers, [&](double jl) {
        LatticeParams p = base;
        p.J = jl * p.lambda;
        try {
            auto basis = build_sector_basis(p, n_ex, parity, opt.dim_budget);
            auto spec = diagonalize(assemble_lattice_hamiltonian(basis));
            return detail::diagnose_spectrum(jl, std::move(spec), opt);
        } catch (const std::exception& e) {
            DiagnosticPoint pt;
            pt.control = jl;
            pt.error = e.what();
            return pt;
        }
    });
    return curve;
}

inline DiagnosticCurve sweep_impurity(ImpurityParams base, const std::vector<double>& mu_grid,
                                      const SweepOptions& opt = {}) {
    if (mu_grid.empty()) throw std::invalid_argument("sweep_impurity: empty grid");
    for (double mu : mu_grid)
        if (mu <= 0.0)
            throw std::invalid_argument(
                "sweep_impurity: mu must be > 0 (mu = 0 restores U(1) and mixes "
                "symmetry blocks)");
    DiagnosticCurve curve;
    curve.model = "impurity";
    curve.S = base.S;
    curve.scaling = ScalingTag::s_three_quarters;
    curve.points = detail::run_points(mu_grid, opt.workers, [&](double mu) {
        ImpurityParams p = base;
        p.mu = mu;
        try {
            auto basis = build_impurity_basis(p, opt.dim_budget);
            auto spec = diagonalize(assemble_impurity_hamiltonian(basis));
            return detail::diagnose_spectrum(mu, std::move(spec), opt);
        } catch (const std::exception& e) {
            DiagnosticPoint pt;
            pt.control = mu;
            pt.error = e.what();
            return pt;
        }
    });
    return curve;
}

// --- interpolation utilities -------------------------------------------------

// Pool-adjacent-violators: least-squares non-decreasing fit.
inline std::vector<double> isotonic_fit(const std::vector<double>& y) {
    std::vector<double> level;
    std::vector<double> weight;
    for (double v : y) {
        level.push_back(v);
        weight.push_back(1.0);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const double w = weight[weight.size() - 2] + weight.back();
            const double m = (level[level.size() - 2] * weight[weight.size() - 2] +
                              level.back() * weight.back()) /
                             w;
            level.pop_back();
            weight.pop_back();
            level.back() = m;
            weight.back() = w;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (std::size_t k = 0; k < level.size(); ++k)
        for (int i = 0; i < static_cast<int>(weight[k] + 0.5); ++i) out.push_back(level[k]);
    return out;
}

// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes); never
// overshoots the data range.
class PchipInterpolant {
  public:
    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || n != y_.size())
            throw std::invalid_argument("PchipInterpolant: need matching arrays, size >= 2");
        if (!std::is_sorted(x_.begin(), x_.end()) ||
            std::adjacent_find(x_.begin(), x_.end()) != x_.end())
            throw std::invalid_argument("PchipInterpolant: x must be strictly increasing");
        slopes_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slopes_[0] = d[0];
        slopes_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                slopes_[i] = 0.0;
            else {
                const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    double y_min() const { return std::min(y_.front(), y_.back()); }
    double y_max() const { return std::max(y_.front(), y_.back()); }

    double operator()(double x) const {
        x = std::clamp(x, x_.front(), x_.back());
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        if (i + 1 >= x_.size()) i = x_.size() - 2;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y_[i] + h10 * h * slopes_[i] + h01 * y_[i + 1] + h11 * h * slopes_[i + 1];
    }

    double derivative(double x, double rel_h = 1e-6) const {
        const double h = rel_h * (x_.back() - x_.front());
        return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
    }

  private:
    std::vector<double> x_, y_;
    std::vector<double> slopes_;
};

// Mean pairwise L2 discrepancy of curves after rescaling controls by
// S^exponent, interpolated onto the common overlap grid.
inline double collapse_check(const std::vector<DiagnosticCurve>& curves, double exponent,
                             bool use_b = false, int grid_points = 200) {
    if (curves.size() < 2) throw std::invalid_argument("collapse_check: need >= 2 curves");
    std::vector<PchipInterpolant> interp;
    double lo = -1e300, hi = 1e300;
    for (const auto& c : curves) {
        std::vector<double> x;
        for (const auto& p : c.points)
            if (p.ok) x.push_back(p.control * std::pow(c.S, exponent));
        std::vector<double> y = c.diagnostic(use_b);
        if (x.size() < 2) throw std::invalid_argument("collapse_check: curve too short");
        interp.emplace_back(x, y);
        lo = std::max(lo, x.front());
        hi = std::min(hi, x.back());
    }
    if (!(hi > lo))
        throw std::runtime_error("collapse_check: rescaled control ranges do not overlap");
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < interp.size(); ++a)
        for (std::size_t b = a + 1; b < interp.size(); ++b) {
            double ss = 0.0;
            for (int g = 0; g < grid_points; ++g) {
                const double x = lo + (hi - lo) * (g + 0.5) / grid_points;
                const double d = interp[a](x) - interp[b](x);
                ss += d * d;
            }
            total += std::sqrt(ss / grid_points);
            ++pairs;
        }
    return total / static_cast<double>(pairs);
}

struct CrossoverMap {
    std::vector<double> j_over_lambda;
    std::vector<double> mu;
    std::vector<double> band_low, band_high;
    bool used_b = false;
    double window_lo = 0.0, window_hi = 0.0;  // validity window in J/lambda
};

namespace detail {

// Monotone restriction of a diagnostic curve: the segment from its minimum
// to its maximum, isotonic-smoothed. Returns (controls, diagnostics, errs).
inline std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>
monotone_window(const DiagnosticCurve& curve, bool use_b) {
    std::vector<double> x = curve.controls();
    std::vector<double> y = curve.diagnostic(use_b);
    std::vector<double> e = curve.diagnostic_err(use_b);
    if (x.size() < 3) throw std::runtime_error("extract_map: too few valid sweep points");
    const auto imax =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const auto imin = static_cast<std::size_t>(
        std::min_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(imax) + 1) -
        y.begin());
    if (imax <= imin + 1) throw std::runtime_error("extract_map: no rising crossover window");
    std::vector<double> xs(x.begin() + imin, x.begin() + imax + 1);
    std::vector<double> ys(y.begin() + imin, y.begin() + imax + 1);
    std::vector<double> es(e.begin() + imin, e.begin() + imax + 1);
    ys = isotonic_fit(ys);
    // strictly increasing after smoothing: merge flats
    std::vector<double> xo, yo, eo;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!yo.empty() && ys[i] <= yo.back() + 1e-12) continue;
        xo.push_back(xs[i]);
        yo.push_back(ys[i]);
        eo.push_back(es[i]);
    }
    if (xo.size() < 2) throw std::runtime_error("extract_map: curve not invertible");
    return {xo, yo, eo};
}

}  // namespace detail

// mu = f2^{-1}(f1(J/lambda)) on the overlap of the two diagnostic ranges,
// with error bands propagated through the interpolants by linearization.
inline CrossoverMap extract_map(const DiagnosticCurve& lattice_curve,
                                const DiagnosticCurve& impurity_curve, bool use_b,
                                int grid_points = 100) {
    auto [x1, y1, e1] = detail::monotone_window(lattice_curve, use_b);
    auto [x2, y2, e2] = detail::monotone_window(impurity_curve, use_b);
    PchipInterpolant f1(x1, y1);          // J/lambda -> diagnostic
    PchipInterpolant f1err(x1, e1);
    PchipInterpolant f2inv(y2, x2);       // diagnostic -> mu
    PchipInterpolant f2err_of_diag(y2, e2);
    PchipInterpolant f2(x2, y2);

    const double diag_lo = std::max(y1.front(), y2.front());
    const double diag_hi = std::min(y1.back(), y2.back());
    if (!(diag_hi > diag_lo))
        throw std::runtime_error("extract_map: diagnostic ranges do not overlap");

    // Validity window in J/lambda: where f1 lands inside the overlap.
    PchipInterpolant f1inv(y1, x1);
    CrossoverMap map;
    map.used_b = use_b;
    map.window_lo = f1inv(diag_lo);
    map.window_hi = f1inv(diag_hi);
    for (int g = 0; g <= grid_points; ++g) {
        const double x = map.window_lo + (map.window_hi - map.window_lo) * g / grid_points;
        const double alpha = std::clamp(f1(x), diag_lo, diag_hi);
        const double mu = f2inv(alpha);
        const double df2 = std::max(std::abs(f2.derivative(mu)), 1e-9);
        const double sigma_alpha =
            std::hypot(std::abs(f1err(x)), std::abs(f2err_of_diag(alpha)));
        const double band = sigma_alpha / df2;
        map.j_over_lambda.push_back(x);
        map.mu.push_back(mu);
        map.band_low.push_back(mu - band);
        map.band_high.push_back(mu + band);
    }
    return map;
}

}  // namespace tcc
