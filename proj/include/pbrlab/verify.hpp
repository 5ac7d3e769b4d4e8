#pragma once

// Acceptance sweep shared by `pbrlab verify-all` and the acceptance test
// binary. Every sample is drawn from CounterRng streams derived from the
// seed, so a report is a pure function of (seed, options).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pbrlab/coupling_solver.hpp"
#include "pbrlab/hamiltonian.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/protocol.hpp"
#include "pbrlab/qstate.hpp"
#include "pbrlab/rng.hpp"
#include "pbrlab/simplex.hpp"

namespace pbrlab::verify {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 42;
    unsigned workers = 1;
    int spectrum_samples = 1000;
    int orthogonality_samples = 500;
    int solver_samples = 200;
    int instance_samples = 100;
    int lp_samples = 1000;
    std::uint64_t sim_runs = 1'000'000;
};

namespace detail {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// Sequential uniforms from one counter stream.
class Draws {
public:
    Draws(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(next_++); }
    std::uint64_t bits() { return rng_.bits(next_++); }
    bool coin() { return (bits() >> 63) != 0; }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

inline std::uint64_t stream(int criterion, std::uint64_t index) {
    return (static_cast<std::uint64_t>(criterion) << 40) | index;
}

inline double min_gap(const std::array<double, 4>& ev) {
    double g = INFINITY;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) g = std::min(g, std::abs(ev[i] - ev[j]));
    return g;
}

/// Random XYZ couplings in [-2, 2]^3 whose eigenvalues are pairwise at
/// least `sep` apart.
inline CouplingSet random_xyz(Draws& d, double sep = 1e-3) {
    for (;;) {
        CouplingSet c{d.uniform(-2, 2), d.uniform(-2, 2), d.uniform(-2, 2), 0.0};
        const std::array<double, 4> ev{c.a - c.b + c.c, -c.a + c.b + c.c, c.a + c.b - c.c, -(c.a + c.b + c.c)};
        if (min_gap(ev) >= sep) return c;
    }
}

inline CouplingSet random_soc(Draws& d, double sep = 1e-3) {
    for (;;) {
        CouplingSet c{d.uniform(-2, 2), d.uniform(-2, 2), d.uniform(-2, 2), d.uniform(-2, 2)};
        if (std::abs(c.d) < 0.05) continue;
        const double r = std::hypot(c.a + c.c, 2 * c.d);
        const std::array<double, 4> ev{-c.a + c.b + c.c, c.a + c.b - c.c, -c.b - r, -c.b + r};
        if (min_gap(ev) >= sep) return c;
    }
}

/// Closed-form SOC couplings at theta with random d, split and b; b is
/// redrawn when it produces a degenerate spectrum.
inline SolverResult random_soc_solution(Draws& d, double theta) {
    const double dd = d.uniform(0.2, 3.0);
    const double split = (d.coin() ? 1.0 : -1.0) * d.uniform(0.2, 3.0);
    for (;;) {
        try {
            const auto r = solve_closed_form(theta, dd, split, d.uniform(-1.0, 1.0));
            if (min_gap(analytic_spectrum_soc(r.couplings).eigenvalues) >= 1e-6) return r;
        } catch (const DegeneracyError&) {
        }
    }
}

inline double random_theta(Draws& d, double margin) { return d.uniform(margin, std::numbers::pi / 2 - margin); }

struct Worst {
    double value = 0.0;
    void update(double x) { value = std::max(value, x); }
};

inline CriterionResult spectrum_check(const Options& o, Variant variant) {
    const bool soc = variant == Variant::Soc;
    CriterionResult r{soc ? "C2" : "C1",
                      soc ? "spin-orbit spectrum: analytic eigenpairs match Jacobi eigensolver"
                          : "XYZ spectrum: Bell-state eigenpairs match Jacobi eigensolver",
                      true, ""};
    Worst ediff, fid_loss, resid, block_off;
    bool exact_bell = true;
    for (int i = 0; i < o.spectrum_samples; ++i) {
        Draws d(o.seed, stream(soc ? 2 : 1, static_cast<std::uint64_t>(i)));
        const auto c = soc ? random_soc(d) : random_xyz(d);
        const auto h = build(variant, c);
        const auto an = analytic_spectrum(variant, c);
        const auto nu = numeric_spectrum(h);
        const auto m = match_spectra(an, nu);
        ediff.update(m.max_eigenvalue_diff);
        fid_loss.update(1.0 - m.min_fidelity);
        resid.update(std::max(max_residual(h, nu), max_residual(h, an)));
        if (soc) {
            const auto pm = bell::phi_minus();
            const auto pp = bell::psi_plus();
            if (an.eigenvectors[0].amps != pm.amps || an.eigenvectors[1].amps != pp.amps) exact_bell = false;
            // project H onto {Phi+, Psi-} and rotate by alpha
            const std::array<JointState, 2> basis{bell::phi_plus(), bell::psi_minus()};
            std::array<std::array<cplx, 2>, 2> blk{};
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y)
                    blk[x][y] = overlap(basis[x], pbrlab::detail::apply(h.entries, basis[y]));
            const double ca = std::cos(*an.alpha), sa = std::sin(*an.alpha);
            const std::array<std::array<double, 2>, 2> rot{{{ca, -sa}, {sa, ca}}};  // columns e'_3, e'_4
            std::array<std::array<cplx, 2>, 2> out{};
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y)
                    for (std::size_t p = 0; p < 2; ++p)
                        for (std::size_t q = 0; q < 2; ++q) out[x][y] += rot[p][x] * blk[p][q] * rot[q][y];
            const double scale = std::max(1.0, h.max_abs());
            block_off.update(std::abs(out[0][1]) / scale);
            block_off.update(std::abs(out[1][0]) / scale);
            ediff.update(std::abs(out[0][0] - an.eigenvalues[2]));
            ediff.update(std::abs(out[1][1] - an.eigenvalues[3]));
        }
    }
    r.passed = ediff.value <= 1e-10 && fid_loss.value <= 1e-10 && resid.value <= kResidualTol;
    r.detail = "samples=" + std::to_string(o.spectrum_samples) + " max|dE|=" + sci(ediff.value) +
               " max(1-F)=" + sci(fid_loss.value) + " max residual=" + sci(resid.value);
    if (soc) {
        r.passed = r.passed && exact_bell && block_off.value <= 1e-12;
        r.detail += std::string(" e'_1=Phi-,e'_2=Psi+ exact=") + (exact_bell ? "yes" : "no") +
                    " block off-diagonal (relative)=" + sci(block_off.value);
    }
    return r;
}

inline CriterionResult xyz_orthogonality(const Options& o) {
    CriterionResult r{"C3", "XYZ forbidden outcomes: four inner products vanish, map is a bijection", true, ""};
    Worst res;
    int bijections = 0;
    for (int i = 0; i < o.orthogonality_samples; ++i) {
        Draws d(o.seed, stream(3, static_cast<std::uint64_t>(i)));
        const auto p = OverlapParams::make(random_theta(d, 1e-6), d.uniform(0, 2 * std::numbers::pi));
        const auto inst = make_protocol(Variant::Xyz, p, random_xyz(d));
        for (double x : inst.residuals) res.update(x);
        if (is_bijection(inst.forbidden) && inst.forbidden == expected_forbidden(Variant::Xyz)) ++bijections;
    }
    r.passed = res.value <= kOrthogonalityTol && bijections == o.orthogonality_samples;
    r.detail = "samples=" + std::to_string(o.orthogonality_samples) + " max residual=" + sci(res.value) +
               " bijections=" + std::to_string(bijections);
    return r;
}

inline CriterionResult soc_orthogonality(const Options& o) {
    CriterionResult r{"C4", "spin-orbit forbidden outcomes vanish with solved couplings; violated constraint is detected",
                      true, ""};
    Worst res;
    double weakest_control = INFINITY;
    int bijections = 0;
    for (int i = 0; i < o.orthogonality_samples; ++i) {
        Draws d(o.seed, stream(4, static_cast<std::uint64_t>(i)));
        const double theta = random_theta(d, 1e-3);
        const auto p = OverlapParams::make(theta, d.uniform(0, 2 * std::numbers::pi));
        const auto sol = random_soc_solution(d, theta);
        const auto inst = make_protocol(Variant::Soc, p, sol.couplings);
        for (double x : inst.residuals) res.update(x);
        if (inst.forbidden == expected_forbidden(Variant::Soc)) ++bijections;

        // negative control: move a + c until |cos(alpha + theta)| >= 1e-3
        CouplingSet bad = sol.couplings;
        double shift = (d.coin() ? 1.0 : -1.0) * 0.01 * bad.d;
        for (;;) {
            bad.a = sol.couplings.a + shift;
            if (std::abs(std::cos(mixing_angle(bad.a + bad.c, bad.d) + theta)) >= 1e-3) break;
            shift *= 2;
        }
        try {
            const auto spec = analytic_spectrum_soc(bad, 0.0);
            const auto rr = orthogonality_residuals(Variant::Soc, make_preparations(Variant::Soc, p), spec);
            weakest_control = std::min(weakest_control, *std::max_element(rr.begin(), rr.end()));
        } catch (const DegeneracyError&) {
            // a == c after the shift; the control is moot for this sample
        }
    }
    r.passed = res.value <= kOrthogonalityTol && bijections == o.orthogonality_samples && weakest_control > 1e-4;
    r.detail = "samples=" + std::to_string(o.orthogonality_samples) + " max residual=" + sci(res.value) +
               " weakest negative-control residual=" + sci(weakest_control);
    return r;
}

inline CriterionResult solver_agreement(const Options& o) {
    CriterionResult r{"C5", "coupling solver: closed form a+c = 2d cot(2 theta) agrees with bisection", true, ""};
    Worst diff, res;
    for (int i = 0; i < o.solver_samples; ++i) {
        Draws d(o.seed, stream(5, static_cast<std::uint64_t>(i)));
        const double theta = random_theta(d, 0.05);
        const double dd = d.uniform(0.1, 5.0);
        const double split = (d.coin() ? 1.0 : -1.0) * d.uniform(0.1, 3.0);
        const double b = d.uniform(-1, 1);
        const auto cf = solve_closed_form(theta, dd, split, b);
        const auto bs = solve_by_root_finding(theta, dd, split, b);
        diff.update(std::abs((cf.couplings.a + cf.couplings.c) - (bs.couplings.a + bs.couplings.c)));
        res.update(cf.residual);
    }
    const auto special = solve_closed_form(std::numbers::pi / 4, 1.0, 2.0);
    const double special_sum = std::abs(special.couplings.a + special.couplings.c);
    r.passed = diff.value <= 1e-8 && res.value <= 1e-12 && special_sum <= 1e-12;
    r.detail = "samples=" + std::to_string(o.solver_samples) + " max|s_closed - s_bisect|=" + sci(diff.value) +
               " max closed-form residual=" + sci(res.value) + " |a+c| at pi/4=" + sci(special_sum);
    return r;
}

inline ProtocolInstance random_instance(Draws& d, Variant v) {
    const double theta = random_theta(d, 1e-3);
    const auto p = OverlapParams::make(theta, d.uniform(0, 2 * std::numbers::pi));
    return make_protocol(v, p, v == Variant::Xyz ? random_xyz(d) : random_soc_solution(d, theta).couplings);
}

/// Random member of the response-LP family: a random set of outcomes pinned
/// to zero (any of the 16 subsets), each pin possibly scaled or repeated,
/// plus normalization and unit upper bounds, in shuffled order.
inline lp::Problem random_lp(Draws& d) {
    lp::Problem p;
    p.num_vars = 4;
    const auto mask = d.bits() >> 60;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!((mask >> k) & 1U)) continue;
        const int copies = 1 + static_cast<int>(d.bits() >> 63);
        for (int c = 0; c < copies; ++c) {
            lp::Constraint e{{0, 0, 0, 0}, lp::Relation::Eq, 0.0, "pin"};
            e.coeffs[k] = (d.coin() ? 1.0 : -1.0) * d.uniform(0.5, 2.0);
            p.constraints.push_back(e);
        }
    }
    const double scale = d.uniform(0.5, 2.0);
    p.constraints.push_back({{scale, scale, scale, scale}, lp::Relation::Eq, scale, "sum"});
    for (std::size_t k = 0; k < 4; ++k) {
        if (d.coin()) continue;
        lp::Constraint u{{0, 0, 0, 0}, lp::Relation::Le, 1.0, "upper"};
        u.coeffs[k] = 1.0;
        p.constraints.push_back(u);
    }
    for (std::size_t i = p.constraints.size(); i > 1; --i) {
        std::swap(p.constraints[i - 1], p.constraints[d.bits() % i]);
    }
    return p;
}

inline CriterionResult exclusion(const Options& o) {
    CriterionResult r{"C6", "exclusion LP: both-overlap infeasible, single-overlap feasible, simplex = subset rule",
                      true, ""};
    int instances = 0, bad_instances = 0;
    for (Variant v : {Variant::Xyz, Variant::Soc}) {
        for (int i = 0; i < o.instance_samples; ++i) {
            Draws d(o.seed, stream(v == Variant::Xyz ? 6 : 7, static_cast<std::uint64_t>(i)));
            const auto inst = random_instance(d, v);
            ++instances;
            bool ok = !lp_feasible(build_problem(inst, SupportProfile::both())).feasible;
            for (int branch : {0, 1}) {
                ok = ok && lp_feasible(build_problem(inst, SupportProfile::alice_only(branch))).feasible;
                ok = ok && lp_feasible(build_problem(inst, SupportProfile::bob_only(branch))).feasible;
            }
            if (!ok) ++bad_instances;
        }
    }
    int disagreements = 0, bad_evidence = 0;
    for (int i = 0; i < o.lp_samples; ++i) {
        Draws d(o.seed, stream(8, static_cast<std::uint64_t>(i)));
        const auto p = random_lp(d);
        const auto sol = lp::solve_feasibility(p, kLpTol);
        if (sol.feasible != subset_rule_feasible(p)) ++disagreements;
        const bool evidence = sol.feasible ? lp::max_violation(p, sol.point) <= kLpTol
                                           : lp::is_farkas_certificate(p, sol.certificate, kLpTol);
        if (!evidence) ++bad_evidence;
    }
    r.passed = bad_instances == 0 && disagreements == 0 && bad_evidence == 0;
    r.detail = "instances=" + std::to_string(instances) + " failing=" + std::to_string(bad_instances) +
               " random LPs=" + std::to_string(o.lp_samples) + " disagreements=" + std::to_string(disagreements) +
               " unverified witnesses/certificates=" + std::to_string(bad_evidence);
    return r;
}

inline std::vector<Verdict> verdicts_for(Variant v, double theta) {
    const auto p = OverlapParams::make(theta);
    CouplingSet c;
    if (v == Variant::Xyz) {
        c = {1.0, 2.0, 3.0, 0.0};
    } else if (std::abs(theta - std::numbers::pi / 4) <= kSpecialCaseTol) {
        c = {1.0, 0.5, -1.0, 1.0};
    } else {
        c = solve_closed_form(theta, 1.0, 2.0).couplings;
    }
    const auto inst = make_protocol(v, p, c);
    return deduce(inst, lp_feasible(build_problem(inst, SupportProfile::both())));
}

inline bool is_single(const std::vector<Verdict>& vs, Relation rel, const std::vector<StatePair>& pairs) {
    return vs.size() == 1 && vs.front().relation == rel && vs.front().pairs == pairs;
}

inline CriterionResult special_case(const Options& o) {
    CriterionResult r{"C7", "special case: disjoint(u,v) exactly at |<u|v>|^2 = 1/2, disjunction elsewhere", true, ""};
    const auto uv = StatePair::of("u", "v");
    const bool quarter = is_single(verdicts_for(Variant::Soc, std::numbers::pi / 4), Relation::Disjoint, {uv});
    const bool third = is_single(verdicts_for(Variant::Soc, std::numbers::pi / 3), Relation::AtLeastOneDisjoint,
                                 {uv, StatePair::of("u", "w")});
    const bool xyz_third = is_single(verdicts_for(Variant::Xyz, std::numbers::pi / 3), Relation::AtLeastOneDisjoint,
                                     {uv, StatePair::of("u", "vbar")});
    int leaks = 0;
    for (int i = 0; i < o.instance_samples; ++i) {
        Draws d(o.seed, stream(9, static_cast<std::uint64_t>(i)));
        const double theta = random_theta(d, 1e-3);
        if (std::abs(theta - std::numbers::pi / 4) <= kSpecialCaseTol) continue;
        for (const auto& v : verdicts_for(Variant::Soc, theta))
            if (v.relation == Relation::Disjoint) ++leaks;
    }
    r.passed = quarter && third && xyz_third && leaks == 0;
    r.detail = std::string("soc pi/4 disjoint(u,v)=") + (quarter ? "yes" : "no") +
               " soc pi/3 disjunction only=" + (third ? "yes" : "no") + " xyz pi/3 disjunction only=" +
               (xyz_third ? "yes" : "no") + " unconditional verdicts off pi/4=" + std::to_string(leaks);
    return r;
}

inline bool within_3sigma(std::uint64_t count, std::uint64_t n, double p) {
    const double f = static_cast<double>(count) / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    return std::abs(f - p) <= 3 * sigma;
}

inline CriterionResult simulation(const Options& o) {
    CriterionResult r{"C8", "simulation: no forbidden outcomes without noise, Born frequencies and noise rate within 3 sigma",
                      true, ""};
    const auto xyz = make_protocol(Variant::Xyz, OverlapParams::make(std::numbers::pi / 3), {1.0, 2.0, 3.0, 0.0});
    const auto soc = make_protocol(Variant::Soc, OverlapParams::make(std::numbers::pi / 3),
                                   solve_closed_form(std::numbers::pi / 3, 1.0, 2.0).couplings);
    const SimulationOptions so{o.workers};

    std::uint64_t forbidden_hits = 0;
    for (const auto* inst : {&xyz, &soc}) {
        const auto t = simulate(*inst, o.sim_runs, o.seed, 0.0, PrepPolicy::UniformRandom, so);
        for (std::size_t i = 0; i < 4; ++i) forbidden_hits += t.counts[i][static_cast<std::size_t>(t.forbidden[i])];
    }

    const auto born = simulate(xyz, 4 * o.sim_runs, o.seed + 1, 0.0, PrepPolicy::RoundRobin, so);
    const Probabilities expect{0.5, 0.125, 0.375, 0.0};
    bool born_ok = true;
    const auto n_uu = born.runs_for(0);
    for (std::size_t k = 0; k < 4; ++k) born_ok = born_ok && within_3sigma(born.counts[0][k], n_uu, expect[k]);

    const auto noisy = simulate(xyz, o.sim_runs, o.seed + 2, 0.04, PrepPolicy::RoundRobin, so);
    const auto rate = forbidden_rate(noisy);
    bool noise_ok = true;
    double min_runs = INFINITY;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto n = noisy.runs_for(i);
        min_runs = std::min(min_runs, static_cast<double>(n));
        noise_ok = noise_ok && within_3sigma(noisy.counts[i][static_cast<std::size_t>(noisy.forbidden[i])], n, 0.01);
    }
    const double sigma = std::sqrt(0.01 * 0.99 / min_runs);
    const double bound = overlap_bound(rate.eps_hat);
    const bool bound_ok = std::abs(bound - 0.04) <= 4 * 3 * sigma;

    r.passed = forbidden_hits == 0 && born_ok && noise_ok && bound_ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%.5f, %.5f, %.5f, %.5f)", static_cast<double>(born.counts[0][0]) / n_uu,
                  static_cast<double>(born.counts[0][1]) / n_uu, static_cast<double>(born.counts[0][2]) / n_uu,
                  static_cast<double>(born.counts[0][3]) / n_uu);
    r.detail = "noise-free forbidden hits=" + std::to_string(forbidden_hits) + " u*u frequencies=" + buf +
               " eps_hat=" + sci(rate.eps_hat) + " bound=" + sci(bound);
    return r;
}

inline CriterionResult cross_protocol(const Options&) {
    CriterionResult r{"C9", "cross-protocol: at |<u|v>|^2 = 1/2 the spin-orbit verdict implies the XYZ disjunction",
                      true, ""};
    const double q = std::numbers::pi / 4;
    const auto xyz = verdicts_for(Variant::Xyz, q);
    const auto soc = verdicts_for(Variant::Soc, q);
    const auto px = build_pair_xyz(OverlapParams::make(q));
    const auto ps = build_pair_soc(OverlapParams::make(q));
    const bool same_overlap = std::abs(fidelity(px.u, px.v) - 0.5) <= 1e-12 && std::abs(fidelity(ps.u, ps.v) - 0.5) <= 1e-12;
    const bool cons = consistent(xyz, soc);
    const bool implies = entails(soc, xyz);
    const bool not_converse = !entails(xyz, soc);
    r.passed = same_overlap && cons && implies && not_converse;
    r.detail = std::string("same |<u|v>|^2=") + (same_overlap ? "yes" : "no") + " consistent=" + (cons ? "yes" : "no") +
               " soc entails xyz=" + (implies ? "yes" : "no") + " xyz entails soc=" + (not_converse ? "no" : "yes");
    return r;
}

inline CriterionResult determinism(const Options& o) {
    CriterionResult r{"C10", "determinism: simulation tables identical across reruns and worker counts", true, ""};
    const auto inst = make_protocol(Variant::Xyz, OverlapParams::make(std::numbers::pi / 3), {1.0, 2.0, 3.0, 0.0});
    const std::uint64_t n = std::max<std::uint64_t>(o.sim_runs / 10, 1000);
    int mismatches = 0;
    for (auto policy : {PrepPolicy::UniformRandom, PrepPolicy::RoundRobin}) {
        const auto ref = simulate(inst, n, o.seed, 0.04, policy, {1});
        for (unsigned w : {1u, 2u, 3u, 7u}) {
            if (!(simulate(inst, n, o.seed, 0.04, policy, {w}) == ref)) ++mismatches;
        }
    }
    r.passed = mismatches == 0;
    r.detail = "runs=" + std::to_string(n) + " worker counts {1,2,3,7} x 2 policies, mismatches=" +
               std::to_string(mismatches);
    return r;
}

inline CriterionResult phase_independence(const Options& o) {
    CriterionResult r{"S1", "phi has no effect on any Born probability", true, ""};
    Worst dev;
    for (Variant v : {Variant::Xyz, Variant::Soc}) {
        for (int i = 0; i < 20; ++i) {
            Draws d(o.seed, stream(11, static_cast<std::uint64_t>(i) + (v == Variant::Soc ? 1000 : 0)));
            const double theta = random_theta(d, 1e-3);
            const auto c = v == Variant::Xyz ? random_xyz(d) : random_soc_solution(d, theta).couplings;
            const auto ref = make_protocol(v, OverlapParams::make(theta, 0.0), c);
            for (int g = 1; g < 16; ++g) {
                const auto inst = make_protocol(v, OverlapParams::make(theta, g * std::numbers::pi / 8), c);
                for (std::size_t p = 0; p < 4; ++p) {
                    const auto a = born_probabilities(ref.preparations[p].state, ref.spectrum);
                    const auto b = born_probabilities(inst.preparations[p].state, inst.spectrum);
                    for (std::size_t k = 0; k < 4; ++k) dev.update(std::abs(a[k] - b[k]));
                }
            }
        }
    }
    r.passed = dev.value <= 1e-12;
    r.detail = "max deviation over phi grid=" + sci(dev.value);
    return r;
}

inline CriterionResult evolution_invariance(const Options& o) {
    CriterionResult r{"S2", "outcome probabilities unchanged by exp(-iHt)", true, ""};
    Worst dev, norm;
    for (Variant v : {Variant::Xyz, Variant::Soc}) {
        for (int i = 0; i < 50; ++i) {
            Draws d(o.seed, stream(12, static_cast<std::uint64_t>(i) + (v == Variant::Soc ? 1000 : 0)));
            const auto inst = random_instance(d, v);
            const double t = d.uniform(-10, 10);
            for (const auto& prep : inst.preparations) {
                const auto evolved = evolve(prep.state, inst.spectrum, t);
                norm.update(std::abs(evolved.norm2() - 1.0));
                const auto a = born_probabilities(prep.state, inst.spectrum);
                const auto b = born_probabilities(evolved, inst.spectrum);
                for (std::size_t k = 0; k < 4; ++k) dev.update(std::abs(a[k] - b[k]));
            }
        }
    }
    r.passed = dev.value <= 1e-12 && norm.value <= 1e-12;
    r.detail = "max probability change=" + sci(dev.value) + " max norm drift=" + sci(norm.value);
    return r;
}

}  // namespace detail

using CriterionFn = std::function<CriterionResult(const Options&)>;

inline std::vector<std::pair<std::string, CriterionFn>> criteria() {
    using namespace detail;
    return {
        {"C1", [](const Options& o) { return spectrum_check(o, Variant::Xyz); }},
        {"C2", [](const Options& o) { return spectrum_check(o, Variant::Soc); }},
        {"C3", xyz_orthogonality},
        {"C4", soc_orthogonality},
        {"C5", solver_agreement},
        {"C6", exclusion},
        {"C7", special_case},
        {"C8", simulation},
        {"C9", cross_protocol},
        {"C10", determinism},
        {"S1", phase_independence},
        {"S2", evolution_invariance},
    };
}

/// Runs one criterion; an exception counts as a failure with its message.
inline CriterionResult run_one(const std::string& id, const CriterionFn& fn, const Options& o) {
    try {
        return fn(o);
    } catch (const std::exception& e) {
        return {id, "raised", false, e.what()};
    }
}

inline std::vector<CriterionResult> run_all(const Options& o) {
    std::vector<CriterionResult> out;
    for (const auto& [id, fn] : criteria()) out.push_back(run_one(id, fn, o));
    return out;
}

inline std::string format_line(const CriterionResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + " " + r.id + " " + r.title + " | " + r.detail;
}

inline std::string report(const Options& o, const std::vector<CriterionResult>& results) {
    std::string s = "pbrlab verify-all seed=" + std::to_string(o.seed) + "\n";
    int failed = 0;
    for (const auto& r : results) {
        s += format_line(r) + "\n";
        if (!r.passed) ++failed;
    }
    s += failed == 0 ? "ALL PASS\n" : std::to_string(failed) + " FAILED\n";
    return s;
}

}  // namespace pbrlab::verify
