// classical.hpp — S -> infinity classical limit of the driven impurity:
// rescaled Hamiltonian, Hamilton's equations, adaptive integration, energy
// shell sampling and Poincare sections at p_s = 0.

#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tcchaos/params.hpp"

namespace tcc {

struct ClassicalState {
    double xc = 0.0, pc = 0.0, xs = 0.0, ps = 0.0;

    ClassicalState& operator+=(const ClassicalState& o) {
        xc += o.xc;
        pc += o.pc;
        xs += o.xs;
        ps += o.ps;
        return *this;
    }
    friend ClassicalState operator+(ClassicalState a, const ClassicalState& b) { return a += b; }
    friend ClassicalState operator*(double c, ClassicalState s) {
        s.xc *= c;
        s.pc *= c;
        s.xs *= c;
        s.ps *= c;
        return s;
    }
    double norm() const { return std::sqrt(xc * xc + pc * pc + xs * xs + ps * ps); }
};

// eta_tilde^2 = 1 - (p_s^2 + omega_s^2 x_s^2) / (2 omega_s); the physical
// domain is 0 <= eta_tilde <= 1.
inline double eta_tilde_sq(const ClassicalState& s, const ImpurityParams& p) {
    return 1.0 - (s.ps * s.ps + p.omega_s * p.omega_s * s.xs * s.xs) / (2.0 * p.omega_s);
}

inline bool in_domain(const ClassicalState& s, const ImpurityParams& p) {
    return eta_tilde_sq(s, p) >= 0.0;
}

inline double classical_energy(const ClassicalState& s, const ImpurityParams& p) {
    const double eta2 = eta_tilde_sq(s, p);
    if (eta2 < 0.0) throw std::domain_error("classical_energy: state outside eta domain");
    const double eta = std::sqrt(eta2);
    const double sqcs = std::sqrt(p.omega_c * p.omega_s);
    return 0.5 * (s.pc * s.pc + p.omega_c * p.omega_c * s.xc * s.xc) +
           0.5 * (s.ps * s.ps + p.omega_s * p.omega_s * s.xs * s.xs) +
           p.lambda * (sqcs * s.xc * s.xs + s.pc * s.ps / sqcs) * eta -
           std::sqrt(2.0 * p.omega_c) * p.mu * s.xc;
}

// Classical U(1) charge, conserved when mu = 0.
inline double classical_charge(const ClassicalState& s, const ImpurityParams& p) {
    return (s.pc * s.pc + p.omega_c * p.omega_c * s.xc * s.xc) / (2.0 * p.omega_c) +
           (s.ps * s.ps + p.omega_s * p.omega_s * s.xs * s.xs) / (2.0 * p.omega_s);
}

inline constexpr double kEtaFloor = 1e-8;

inline ClassicalState eom_rhs(const ClassicalState& s, const ImpurityParams& p) {
    const double eta2 = eta_tilde_sq(s, p);
    if (eta2 < kEtaFloor * kEtaFloor)
        throw std::domain_error("eom_rhs: eta_tilde below floor (1/eta singularity)");
    const double eta = std::sqrt(eta2);
    const double sqcs = std::sqrt(p.omega_c * p.omega_s);
    const double cross = p.omega_c * p.omega_s * s.xc * s.xs + s.pc * s.ps;
    ClassicalState d;
    d.xc = s.pc + (p.lambda / sqcs) * eta * s.ps;
    d.pc = -p.omega_c * p.omega_c * s.xc - p.lambda * sqcs * eta * s.xs +
           std::sqrt(2.0 * p.omega_c) * p.mu;
    d.xs = s.ps + (p.lambda / sqcs) *
                      (eta * s.pc - cross * s.ps / (2.0 * p.omega_s * eta));
    d.ps = -p.omega_s * p.omega_s * s.xs -
           p.lambda * sqcs * (eta * s.xc - cross * s.xs / (2.0 * p.omega_c * eta));
    return d;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    bool hit_boundary = false;  // pinned to eta ~ 0 and truncated
};

namespace detail {

// One Dormand-Prince 5(4) step; returns 5th-order solution and error estimate.
inline std::pair<ClassicalState, double> dopri_step(const ClassicalState& y, double h,
                                                    const ImpurityParams& p) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const ClassicalState k1 = eom_rhs(y, p);
    const ClassicalState k2 = eom_rhs(y + h * (a21 * k1), p);
    const ClassicalState k3 = eom_rhs(y + h * (a31 * k1 + a32 * k2), p);
    const ClassicalState k4 = eom_rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3), p);
    const ClassicalState k5 = eom_rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), p);
    const ClassicalState k6 =
        eom_rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), p);
    const ClassicalState y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ClassicalState k7 = eom_rhs(y5, p);
    const ClassicalState err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, err.norm()};
}

}  // namespace detail

inline Trajectory integrate(const ClassicalState& state0, const ImpurityParams& p,
                            double t_max, double tol = 1e-10) {
    if (!in_domain(state0, p) || eta_tilde_sq(state0, p) < 1e-12)
        throw std::domain_error("integrate: initial state outside eta domain");
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(state0);
    double t = 0.0, h = 1e-3;
    ClassicalState y = state0;
    while (t < t_max) {
        h = std::min(h, t_max - t);
        bool ok = true;
        std::pair<ClassicalState, double> step;
        try {
            step = detail::dopri_step(y, h, p);
            if (!in_domain(step.first, p) ||
                eta_tilde_sq(step.first, p) < kEtaFloor * kEtaFloor)
                ok = false;
        } catch (const std::domain_error&) {
            ok = false;
        }
        // Error-per-unit-time control keeps the global drift proportional to tol.
        const double scale = tol * h * std::max(1.0, y.norm());
        if (ok && step.second <= scale) {
            t += h;
            y = step.first;
            traj.times.push_back(t);
            traj.states.push_back(y);
            ++traj.accepted_steps;
            const double grow = 0.9 * std::pow(scale / std::max(step.second, 1e-300), 0.25);
            h *= std::clamp(grow, 0.3, 5.0);
        } else {
            ++traj.rejected_steps;
            h *= ok ? std::clamp(0.9 * std::pow(scale / step.second, 0.25), 0.1, 0.9) : 0.5;
            if (h < 1e-14) {
                traj.hit_boundary = true;  // pinned against the eta = 0 boundary
                break;
            }
        }
    }
    return traj;
}

struct SectionPoint {
    std::size_t trajectory_id = 0;
    std::size_t crossing_index = 0;
    double xc = 0.0, pc = 0.0, t_cross = 0.0;
};

struct PoincareSection {
    double energy = 0.0;
    ImpurityParams params;
    std::vector<SectionPoint> points;
    std::vector<std::size_t> points_per_trajectory;
    double tol = 1e-10;
    std::size_t truncated_trajectories = 0;
};

// Rejection sampler on the energy shell: (x_s, p_s) uniform in the eta disk,
// x_c uniform in a bracket, p_c from the energy quadratic.
inline ClassicalState sample_energy_shell(const ImpurityParams& p, double energy,
                                          std::uint64_t seed, int max_tries = 200000) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double rs = std::sqrt(2.0 * p.omega_s);  // eta-disk radii
    const double xc_scale =
        std::sqrt(2.0 * std::max(1.0, std::abs(energy))) / std::max(p.omega_c, 1e-6) +
        2.0 * (p.mu + p.lambda);
    for (int tries = 0; tries < max_tries; ++tries) {
        ClassicalState s;
        s.xs = uni(rng) * rs / p.omega_s;
        s.ps = uni(rng) * rs;
        const double eta2 = eta_tilde_sq(s, p);
        if (eta2 < 1e-4) continue;
        s.xc = uni(rng) * xc_scale;
        // E = pc^2/2 + (lambda eta / sqrt(wc ws)) ps * pc + rest(xc, xs, ps)
        const double eta = std::sqrt(eta2);
        const double sqcs = std::sqrt(p.omega_c * p.omega_s);
        const double bcoef = p.lambda * eta * s.ps / sqcs;
        const double rest = 0.5 * p.omega_c * p.omega_c * s.xc * s.xc +
                            0.5 * (s.ps * s.ps + p.omega_s * p.omega_s * s.xs * s.xs) +
                            p.lambda * sqcs * s.xc * s.xs * eta -
                            std::sqrt(2.0 * p.omega_c) * p.mu * s.xc;
        const double disc = bcoef * bcoef - 2.0 * (rest - energy);
        if (disc < 0.0) continue;
        s.pc = -bcoef + (uni(rng) > 0.0 ? 1.0 : -1.0) * std::sqrt(disc);
        if (std::abs(classical_energy(s, p) - energy) > 1e-10 * std::max(1.0, std::abs(energy)))
            continue;
        return s;
    }
    throw std::runtime_error("sample_energy_shell: energy shell unattainable");
}

namespace detail {

// Fixed-step RK4 used only for crossing-time refinement inside one accepted step.
inline ClassicalState rk4_advance(ClassicalState y, double dt, const ImpurityParams& p,
                                  int substeps = 8) {
    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        const ClassicalState k1 = eom_rhs(y, p);
        const ClassicalState k2 = eom_rhs(y + (0.5 * h) * k1, p);
        const ClassicalState k3 = eom_rhs(y + (0.5 * h) * k2, p);
        const ClassicalState k4 = eom_rhs(y + h * k3, p);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace detail

// One-sided section: sign changes of p_s with dp_s/dt < 0, refined by
// bisection in time to |p_s| < tol.
inline PoincareSection poincare_section(const ImpurityParams& p, double energy, int n_seeds,
                                        int n_crossings, std::uint64_t seed,
                                        double t_max = 2000.0, double ode_tol = 1e-10) {
    PoincareSection section;
    section.energy = energy;
    section.params = p;
    section.tol = 1e-10;
    for (int traj_id = 0; traj_id < n_seeds; ++traj_id) {
        ClassicalState s0 = sample_energy_shell(p, energy, seed + 7919u * traj_id);
        Trajectory traj = integrate(s0, p, t_max, ode_tol);
        if (traj.hit_boundary) ++section.truncated_trajectories;
        std::size_t found = 0;
        for (std::size_t i = 0; i + 1 < traj.states.size() &&
                                found < static_cast<std::size_t>(n_crossings);
             ++i) {
            const auto& a = traj.states[i];
            const auto& b = traj.states[i + 1];
            if (!(a.ps > 0.0 && b.ps <= 0.0)) continue;  // downward crossing
            double lo = 0.0, hi = traj.times[i + 1] - traj.times[i];
            ClassicalState cross = b;
            double tc = hi;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                ClassicalState ymid = detail::rk4_advance(a, mid, p);
                if (ymid.ps > 0.0)
                    lo = mid;
                else {
                    hi = mid;
                    cross = ymid;
                    tc = mid;
                }
                if (std::abs(cross.ps) < section.tol) break;
            }
            if (std::abs(cross.ps) > 1e-8) continue;  // refinement failed, skip
            section.points.push_back(
                {static_cast<std::size_t>(traj_id), found, cross.xc, cross.pc,
                 traj.times[i] + tc});
            ++found;
        }
        section.points_per_trajectory.push_back(found);
    }
    if (section.points.empty())
        throw std::runtime_error("poincare_section: no valid crossings found");
    return section;
}

// Correlation-dimension proxy of a 2-D point set: slope of log C(r) between
// two radii. Near 1 for curve-like sections, near 2 for area-filling clouds.
inline double point_set_dimension(const std::vector<SectionPoint>& pts) {
    if (pts.size() < 32) throw std::invalid_argument("section_dimension_proxy: too few points");
    double mx = 0.0, my = 0.0;
    for (const auto& q : pts) {
        mx += q.xc;
        my += q.pc;
    }
    mx /= pts.size();
    my /= pts.size();
    double sx = 0.0, sy = 0.0;
    for (const auto& q : pts) {
        sx += (q.xc - mx) * (q.xc - mx);
        sy += (q.pc - my) * (q.pc - my);
    }
    sx = std::sqrt(sx / pts.size());
    sy = std::sqrt(sy / pts.size());
    sx = std::max(sx, 1e-12);
    sy = std::max(sy, 1e-12);
    const double r1 = 0.05, r2 = 0.25;  // radii in standardized units
    std::size_t c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = (pts[i].xc - pts[j].xc) / sx;
            const double dy = (pts[i].pc - pts[j].pc) / sy;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < r1) ++c1;
            if (d < r2) ++c2;
        }
    if (c1 == 0) c1 = 1;
    return std::log(static_cast<double>(c2) / c1) / std::log(r2 / r1);
}


// Section-level proxy: average of per-trajectory correlation dimensions over
// trajectories with enough points, falling back to the pooled point set.
inline double section_dimension_proxy(const PoincareSection& section,
                                      std::size_t min_points = 48) {
    double total = 0.0;
    std::size_t used = 0;
    std::size_t n_traj = section.points_per_trajectory.size();
    for (std::size_t id = 0; id < n_traj; ++id) {
        if (section.points_per_trajectory[id] < min_points) continue;
        std::vector<SectionPoint> own;
        own.reserve(section.points_per_trajectory[id]);
        for (const auto& q : section.points)
            if (q.trajectory_id == id) own.push_back(q);
        total += point_set_dimension(own);
        ++used;
    }
    if (used == 0) return point_set_dimension(section.points);
    return total / static_cast<double>(used);
}

}  // namespace tcc
