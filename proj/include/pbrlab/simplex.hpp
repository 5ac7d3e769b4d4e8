#pragma once

// Dense phase-1 simplex for feasibility of
//   A x (=, <=, >=) b,  x >= 0.
// Bland's rule prevents cycling. On infeasibility the optimal phase-1 duals
// are returned as a Farkas certificate y with y^T A <= 0 on every
// nonnegative column and y^T b > 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pbrlab/errors.hpp"

namespace pbrlab::lp {

enum class Relation { Eq, Le, Ge };

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::Eq;
    double rhs = 0.0;
    std::string tag;
};

struct Problem {
    std::size_t num_vars = 0;
    std::vector<Constraint> constraints;
};

struct Result {
    bool feasible = false;
    std::vector<double> point;        // feasible vertex
    std::vector<double> certificate;  // one multiplier per constraint, scaled so y^T b = 1
    double phase1_objective = 0.0;
    int pivots = 0;
};

inline void validate(const Problem& p) {
    if (p.num_vars == 0) throw ValidationError("lp: problem has no variables");
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        if (c.coeffs.size() != p.num_vars) {
            throw ValidationError("lp: constraint " + std::to_string(i) + " has " + std::to_string(c.coeffs.size()) +
                                  " coefficients, expected " + std::to_string(p.num_vars));
        }
        for (double a : c.coeffs)
            if (!std::isfinite(a)) throw ValidationError("lp: constraint " + std::to_string(i) + " is not finite");
        if (!std::isfinite(c.rhs)) throw ValidationError("lp: constraint " + std::to_string(i) + " rhs is not finite");
    }
}

/// Largest violation of the constraints (and of x >= 0) at point x.
inline double max_violation(const Problem& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (double xi : x) worst = std::max(worst, -xi);
    for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < p.num_vars; ++j) lhs += c.coeffs[j] * x[j];
        const double d = lhs - c.rhs;
        switch (c.relation) {
            case Relation::Eq: worst = std::max(worst, std::abs(d)); break;
            case Relation::Le: worst = std::max(worst, d); break;
            case Relation::Ge: worst = std::max(worst, -d); break;
        }
    }
    return worst;
}

/// True when y proves infeasibility: y^T b > 0, y^T A <= tol per column,
/// y_i <= tol on <= rows and y_i >= -tol on >= rows.
inline bool is_farkas_certificate(const Problem& p, const std::vector<double>& y, double tol = 1e-9) {
    if (y.size() != p.constraints.size()) return false;
    double yb = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        yb += y[i] * p.constraints[i].rhs;
        if (p.constraints[i].relation == Relation::Le && y[i] > tol) return false;
        if (p.constraints[i].relation == Relation::Ge && y[i] < -tol) return false;
    }
    if (!(yb > tol)) return false;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) col += y[i] * p.constraints[i].coeffs[j];
        if (col > tol) return false;
    }
    return true;
}

inline Result solve_feasibility(const Problem& prob, double tol = 1e-9, int max_pivots = 10000) {
    validate(prob);
    const std::size_t m = prob.constraints.size();
    const std::size_t n = prob.num_vars;

    std::size_t n_slack = 0;
    for (const auto& c : prob.constraints)
        if (c.relation != Relation::Eq) ++n_slack;

    // columns: [x | slack/surplus | artificial | rhs]
    const std::size_t art0 = n + n_slack;
    const std::size_t cols = art0 + m + 1;
    const std::size_t rhs = cols - 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    std::vector<double> row_sign(m, 1.0);
    std::vector<std::size_t> basis(m);

    std::size_t slack = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = prob.constraints[i];
        for (std::size_t j = 0; j < n; ++j) t[i][j] = c.coeffs[j];
        t[i][rhs] = c.rhs;
        if (c.relation == Relation::Le) t[i][slack++] = 1.0;
        if (c.relation == Relation::Ge) t[i][slack++] = -1.0;
        if (t[i][rhs] < 0.0) {
            row_sign[i] = -1.0;
            for (std::size_t j = 0; j < art0; ++j) t[i][j] = -t[i][j];
            t[i][rhs] = -t[i][rhs];
        }
        t[i][art0 + i] = 1.0;
        basis[i] = art0 + i;
    }
    // objective row holds reduced costs of min sum(artificials), priced out
    auto& obj = t[m];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (j < art0 || j == rhs) obj[j] -= t[i][j];

    Result res;
    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < art0 + m; ++j) {
            if (obj[j] < -tol) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        std::size_t leave = m;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > tol) {
                const double ratio = t[i][rhs] / t[i][enter];
                if (leave == m || ratio < best - tol || (std::abs(ratio - best) <= tol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == m) throw NumericError("lp: phase-1 objective unbounded (cannot happen for a valid tableau)");
        if (++res.pivots > max_pivots) throw NumericError("lp: pivot budget exhausted");

        const double piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    res.phase1_objective = -obj[rhs];
    if (res.phase1_objective <= tol) {
        res.feasible = true;
        res.point.assign(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) res.point[basis[i]] = t[i][rhs];
        return res;
    }

    // Duals of the phase-1 LP: y_i = 1 - reduced cost of artificial i.
    res.certificate.resize(m);
    double yb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        res.certificate[i] = row_sign[i] * (1.0 - obj[art0 + i]);
        yb += res.certificate[i] * prob.constraints[i].rhs;
    }
    for (auto& y : res.certificate) y /= yb;
    return res;
}

}  // namespace pbrlab::lp
