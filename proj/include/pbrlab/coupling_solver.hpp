#pragma once

// Spin-orbit couplings that satisfy cos(alpha + theta) = 0.
//
// alpha depends on the couplings only through s = a + c and d. With d > 0,
// alpha lies in (0, pi/2), so the constraint means alpha = pi/2 - theta, i.e.
// tan(alpha) = cot(theta). Substituting into the mixing-angle formula and
// squaring gives s = d (cot(theta) - tan(theta)) = 2 d cot(2 theta).
// For d < 0 the principal branch puts alpha in (-pi/2, 0] and alpha + theta
// in (-pi/2, pi/2), where the cosine never vanishes, so d <= 0 is rejected.

#include <cmath>
#include <numbers>
#include <string>

#include "pbrlab/errors.hpp"
#include "pbrlab/hamiltonian.hpp"

namespace pbrlab {

struct SolverResult {
    CouplingSet couplings;
    double alpha = 0.0;
    double residual = 0.0;  // |cos(alpha + theta)|
    // Set when the couplings give a spectrum with a gap below kGapTol. The
    // constraint still holds, but no protocol instance can be built from
    // them; a different b usually fixes it.
    bool degenerate = false;
    std::string degeneracy;
};

namespace detail {

inline void check_solver_inputs(double theta, double d, double split) {
    if (!std::isfinite(theta) || !std::isfinite(d) || !std::isfinite(split)) {
        throw ValidationError("solver inputs must be finite");
    }
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw DomainError("theta = " + num(theta) + " outside (0, pi/2)");
    }
    if (!(d > 0.0)) {
        throw DomainError("d = " + num(d) +
                          ": cos(alpha + theta) = 0 has no solution unless d > 0");
    }
    if (split == 0.0) throw DomainError("split = a - c = 0 makes E'_1 = E'_2 (requires a != c)");
}

inline SolverResult finish(double theta, double sum, double d, double split, double b) {
    SolverResult r;
    r.couplings = {.a = (sum + split) / 2, .b = b, .c = (sum - split) / 2, .d = d};
    r.alpha = mixing_angle(sum, d);
    r.residual = std::abs(std::cos(r.alpha + theta));
    try {
        analytic_spectrum_soc(r.couplings);
    } catch (const DegeneracyError& e) {
        r.degenerate = true;
        r.degeneracy = std::string(e.what()) + "; b = " + num(b) + " collides, supply a different b";
    }
    return r;
}

}  // namespace detail

/// a + c = 2 d cot(2 theta); a - c = split; b is passed through unchanged.
inline SolverResult solve_closed_form(double theta, double d, double split, double b = 0.0) {
    detail::check_solver_inputs(theta, d, split);
    const double sum = 2.0 * d * std::cos(2.0 * theta) / std::sin(2.0 * theta);
    return detail::finish(theta, sum, d, split, b);
}

struct BisectionOptions {
    double bracket_scale = 1e3;  // search s in [-scale*d, scale*d]
    double f_tol = 1e-10;
    int max_iter = 400;
};

/// f(s) = cos(alpha(s, d) + theta). alpha increases with s, so f decreases.
inline double constraint_function(double s, double d, double theta) {
    return std::cos(mixing_angle(s, d) + theta);
}

/// Bisection on s = a + c over [-scale*d, scale*d].
inline SolverResult solve_by_root_finding(double theta, double d, double split, double b = 0.0,
                                          const BisectionOptions& opt = {}) {
    detail::check_solver_inputs(theta, d, split);
    double lo = -opt.bracket_scale * d;
    double hi = opt.bracket_scale * d;
    double f_lo = constraint_function(lo, d, theta);
    double f_hi = constraint_function(hi, d, theta);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        throw NumericError("solve_by_root_finding: no sign change of cos(alpha + theta) in [" +
                           num(lo) + ", " + num(hi) + "]");
    }
    for (int it = 0; it < opt.max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f_mid = constraint_function(mid, d, theta);
        if (f_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double s = std::abs(constraint_function(lo, d, theta)) <= std::abs(constraint_function(hi, d, theta))
                         ? lo
                         : hi;
    SolverResult r = detail::finish(theta, s, d, split, b);
    if (r.residual > opt.f_tol) {
        throw NumericError("solve_by_root_finding: residual " + num(r.residual) +
                           " above tolerance");
    }
    return r;
}

}  // namespace pbrlab
