#pragma once

// Finite ontological models for the exclusion argument.
//
// A shared ontic state lambda_AB = lambda_A lambda_B lies in the support of
// every preparation whose Alice and Bob states both admit it. Its response
// p(k | lambda_AB) over the four outcomes must give zero weight to every
// outcome forbidden by such a preparation, and must still sum to 1. When
// both sides overlap, all four preparations apply and the forbidden map is a
// bijection, so every outcome is pinned to zero and no response exists.
//
// Noise-robust form. Let q_a (q_b) be the probability that Alice's (Bob's)
// source emits an ontic state from the overlap region, and eps the largest
// observed forbidden-outcome frequency. For a shared lambda_AB the forbidden
// outcomes of the four preparations are four distinct outcomes, so their
// response weights sum to exactly 1. Averaging over the shared region, which
// every preparation reaches with probability q_a q_b, gives
//   sum_prep P(forbidden | prep) >= q_a q_b.
// Each term is at most eps, hence q_a q_b <= 4 eps.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pbrlab/errors.hpp"
#include "pbrlab/protocol.hpp"
#include "pbrlab/simplex.hpp"

namespace pbrlab {

inline constexpr double kLpTol = 1e-9;
inline constexpr double kSpecialCaseTol = 1e-10;

/// Which sides share an ontic state. A side without overlap is pinned to
/// one of its two states by `*_branch` (0 = first state, 1 = second).
struct SupportProfile {
    bool alice_overlap = false;
    bool bob_overlap = false;
    double q_a = 1.0;
    double q_b = 1.0;
    int alice_branch = 0;
    int bob_branch = 0;

    static SupportProfile both(double qa = 1.0, double qb = 1.0) { return {true, true, qa, qb, 0, 0}; }
    static SupportProfile alice_only(int bob_branch = 0, double qa = 1.0) { return {true, false, qa, 1.0, 0, bob_branch}; }
    static SupportProfile bob_only(int alice_branch = 0, double qb = 1.0) { return {false, true, 1.0, qb, alice_branch, 0}; }
};

struct FeasibilityProblem {
    lp::Problem lp;                  // variables p(e_1..e_4 | lambda_AB)
    std::vector<int> preparations;   // preparations whose support holds lambda_AB
    std::vector<int> zeroed;         // outcomes pinned to zero, in preparation order
};

/// Builds the LP for the response of the shared ontic state.
inline FeasibilityProblem build_problem(const ProtocolInstance& inst, const SupportProfile& prof) {
    if (!prof.alice_overlap && !prof.bob_overlap) {
        throw ValidationError("build_problem: no overlap flag set, so there is no shared ontic state to test");
    }
    auto check_weight = [](bool flag, double q, const char* name) {
        if (flag && !(q > 0.0 && q <= 1.0)) {
            throw ValidationError(std::string("build_problem: ") + name + " must lie in (0, 1] when its overlap flag is set");
        }
    };
    check_weight(prof.alice_overlap, prof.q_a, "q_a");
    check_weight(prof.bob_overlap, prof.q_b, "q_b");
    auto check_branch = [](int b, const char* name) {
        if (b != 0 && b != 1) throw ValidationError(std::string("build_problem: ") + name + " must be 0 or 1");
    };
    check_branch(prof.alice_branch, "alice_branch");
    check_branch(prof.bob_branch, "bob_branch");

    const std::vector<int> alice = prof.alice_overlap ? std::vector<int>{0, 1} : std::vector<int>{prof.alice_branch};
    const std::vector<int> bob = prof.bob_overlap ? std::vector<int>{0, 1} : std::vector<int>{prof.bob_branch};

    FeasibilityProblem fp;
    fp.lp.num_vars = 4;
    for (int a : alice) {
        for (int b : bob) {
            const int prep = 2 * a + b;
            const int k = inst.forbidden[static_cast<std::size_t>(prep)];
            fp.preparations.push_back(prep);
            fp.zeroed.push_back(k);
            lp::Constraint c;
            c.coeffs.assign(4, 0.0);
            c.coeffs[static_cast<std::size_t>(k)] = 1.0;
            c.relation = lp::Relation::Eq;
            c.rhs = 0.0;
            c.tag = "p(" + inst.outcome_name(k) + ") = 0, forbidden by " +
                    inst.preparations[static_cast<std::size_t>(prep)].label;
            fp.lp.constraints.push_back(std::move(c));
        }
    }
    fp.lp.constraints.push_back({{1.0, 1.0, 1.0, 1.0}, lp::Relation::Eq, 1.0, "sum_k p(k) = 1"});
    for (std::size_t k = 0; k < 4; ++k) {
        lp::Constraint c{{0.0, 0.0, 0.0, 0.0}, lp::Relation::Le, 1.0, "p(" + inst.outcome_name(static_cast<int>(k)) + ") <= 1"};
        c.coeffs[k] = 1.0;
        fp.lp.constraints.push_back(std::move(c));
    }
    return fp;
}

/// Outcomes forced to zero by equality rows of the form a * p_k = 0.
inline std::array<bool, 4> zeroed_outcomes(const lp::Problem& p) {
    std::array<bool, 4> z{};
    for (const auto& c : p.constraints) {
        if (c.relation != lp::Relation::Eq || c.rhs != 0.0) continue;
        int nonzero = -1;
        int count = 0;
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            if (c.coeffs[j] != 0.0) {
                ++count;
                nonzero = static_cast<int>(j);
            }
        }
        if (count == 1) z[static_cast<std::size_t>(nonzero)] = true;
    }
    return z;
}

/// Closed-form decision for this problem family: feasible unless every
/// outcome is pinned to zero.
inline bool subset_rule_feasible(const lp::Problem& p) {
    const auto z = zeroed_outcomes(p);
    return !std::all_of(z.begin(), z.end(), [](bool b) { return b; });
}

struct FeasibilityReport {
    bool feasible = false;
    std::vector<double> witness;      // response distribution when feasible
    std::vector<double> vertex;       // simplex vertex when feasible
    std::vector<double> certificate;  // Farkas multipliers when infeasible
    std::vector<std::string> constraint_tags;
};

/// Decides by phase-1 simplex and cross-checks against the subset rule.
/// The reported witness is the uniform distribution over outcomes that are
/// not pinned to zero, verified against every constraint.
inline FeasibilityReport lp_feasible(const lp::Problem& prob) {
    const auto sol = lp::solve_feasibility(prob, kLpTol);
    if (sol.feasible != subset_rule_feasible(prob)) {
        throw LogicError("lp_feasible: simplex decision disagrees with the subset rule");
    }
    FeasibilityReport r;
    r.feasible = sol.feasible;
    for (const auto& c : prob.constraints) r.constraint_tags.push_back(c.tag);
    if (sol.feasible) {
        r.vertex = sol.point;
        if (lp::max_violation(prob, r.vertex) > kLpTol) throw LogicError("lp_feasible: simplex vertex violates constraints");
        const auto z = zeroed_outcomes(prob);
        const auto free = static_cast<double>(std::count(z.begin(), z.end(), false));
        r.witness.resize(prob.num_vars);
        for (std::size_t k = 0; k < prob.num_vars; ++k) r.witness[k] = z[k] ? 0.0 : 1.0 / free;
        if (lp::max_violation(prob, r.witness) > kLpTol) r.witness = r.vertex;
    } else {
        r.certificate = sol.certificate;
        if (!lp::is_farkas_certificate(prob, r.certificate, kLpTol)) {
            throw LogicError("lp_feasible: infeasibility certificate does not verify");
        }
    }
    return r;
}

inline FeasibilityReport lp_feasible(const FeasibilityProblem& fp) { return lp_feasible(fp.lp); }

// ---------------------------------------------------------------------------
// Verdicts

enum class Relation { ConjointPossible, Disjoint, AtLeastOneDisjoint };

inline const char* relation_name(Relation r) {
    switch (r) {
        case Relation::ConjointPossible: return "conjoint-possible";
        case Relation::Disjoint: return "disjoint";
        case Relation::AtLeastOneDisjoint: return "at-least-one-disjoint";
    }
    return "?";
}

/// Unordered pair of state labels, stored sorted.
struct StatePair {
    std::string first;
    std::string second;

    static StatePair of(std::string x, std::string y) {
        if (y < x) std::swap(x, y);
        return {std::move(x), std::move(y)};
    }
    friend bool operator==(const StatePair&, const StatePair&) = default;
    friend auto operator<=>(const StatePair&, const StatePair&) = default;
};

struct Provenance {
    std::vector<Variant> variants;
    double theta = 0.0;
    std::vector<std::string> chain;
};

/// Disjoint: the single pair shares no ontic state. AtLeastOneDisjoint:
/// not every listed pair is conjoint.
struct Verdict {
    std::vector<StatePair> pairs;
    Relation relation = Relation::AtLeastOneDisjoint;
    Provenance provenance;
};

/// Turns the both-overlap infeasibility of an instance into its verdict.
/// XYZ: not (conjoint(u,v) and conjoint(u,vbar)). SOC: not (conjoint(u,v) and
/// conjoint(u,w)); at theta = pi/4, w is v itself and the verdict becomes
/// disjoint(u,v).
inline std::vector<Verdict> deduce(const ProtocolInstance& inst, const FeasibilityReport& both_overlap) {
    if (both_overlap.feasible) {
        throw LogicError("deduce: both-overlap problem reported feasible; the forbidden map cannot be a bijection");
    }
    const double theta = inst.params.theta();
    Provenance prov{{inst.variant}, theta, {}};
    prov.chain.push_back(std::string(variant_name(inst.variant)) + " protocol, theta = " + num(theta));
    prov.chain.push_back("forbidden map is a bijection over the four preparations");
    prov.chain.push_back("both-overlap response LP infeasible (Farkas certificate verified)");

    const std::string second = inst.variant == Variant::Xyz ? "vbar" : "w";
    if (inst.variant == Variant::Soc && std::abs(theta - std::numbers::pi / 4) <= kSpecialCaseTol) {
        const auto pair = build_pair_soc(inst.params);
        if (1.0 - fidelity(pair.v, pair.w) > 1e-9) throw LogicError("deduce: w and v differ at theta = pi/4");
        prov.chain.push_back("theta = pi/4: w = v, |<u|v>|^2 = 1/2");
        prov.chain.push_back("conjoint(u,v) and conjoint(u,w) reduces to conjoint(u,v)");
        return {Verdict{{StatePair::of("u", "v")}, Relation::Disjoint, prov}};
    }
    return {Verdict{{StatePair::of("u", "v"), StatePair::of("u", second)}, Relation::AtLeastOneDisjoint, prov}};
}

namespace detail {

inline std::vector<StatePair> collect_pairs(const std::vector<Verdict>& a, const std::vector<Verdict>& b) {
    std::vector<StatePair> all;
    for (const auto* set : {&a, &b})
        for (const auto& v : *set)
            for (const auto& p : v.pairs) all.push_back(p);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

/// conjoint[i] is the truth value of conjoint(pairs[i]).
inline bool holds(const Verdict& v, const std::vector<StatePair>& pairs, const std::vector<bool>& conjoint) {
    auto value = [&](const StatePair& p) {
        const auto it = std::find(pairs.begin(), pairs.end(), p);
        return conjoint[static_cast<std::size_t>(it - pairs.begin())];
    };
    switch (v.relation) {
        case Relation::ConjointPossible: return true;
        case Relation::Disjoint: return !value(v.pairs.front());
        case Relation::AtLeastOneDisjoint:
            return std::any_of(v.pairs.begin(), v.pairs.end(), [&](const StatePair& p) { return !value(p); });
    }
    return false;
}

template <typename F>
void for_each_assignment(std::size_t n, F&& f) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<bool> conjoint(n);
        for (std::size_t i = 0; i < n; ++i) conjoint[i] = (mask >> i) & 1U;
        f(conjoint);
    }
}

}  // namespace detail

/// Some assignment of conjoint/disjoint to the pairs satisfies every verdict.
inline bool consistent(const std::vector<Verdict>& a, const std::vector<Verdict>& b) {
    const auto pairs = detail::collect_pairs(a, b);
    bool found = false;
    detail::for_each_assignment(pairs.size(), [&](const std::vector<bool>& c) {
        const auto ok = [&](const Verdict& v) { return detail::holds(v, pairs, c); };
        if (std::all_of(a.begin(), a.end(), ok) && std::all_of(b.begin(), b.end(), ok)) found = true;
    });
    return found;
}

/// Every assignment satisfying `premises` also satisfies `conclusions`.
inline bool entails(const std::vector<Verdict>& premises, const std::vector<Verdict>& conclusions) {
    const auto pairs = detail::collect_pairs(premises, conclusions);
    bool valid = true;
    detail::for_each_assignment(pairs.size(), [&](const std::vector<bool>& c) {
        const auto ok = [&](const Verdict& v) { return detail::holds(v, pairs, c); };
        if (std::all_of(premises.begin(), premises.end(), ok) &&
            !std::all_of(conclusions.begin(), conclusions.end(), ok)) {
            valid = false;
        }
    });
    return valid;
}

/// Upper bound 4 * eps_hat on q_a * q_b (see the derivation at the top).
inline double overlap_bound(double eps_hat) {
    if (!(eps_hat >= 0.0 && eps_hat <= 1.0)) {
        throw ValidationError("overlap_bound: eps_hat must lie in [0, 1]");
    }
    return 4.0 * eps_hat;
}

}  // namespace pbrlab
