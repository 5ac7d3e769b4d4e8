#pragma once

// Protocol instances: the four joint preparations, the measurement basis of
// the interaction Hamiltonian and the outcome each preparation forbids.
// Also Born probabilities and seeded Monte Carlo runs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "pbrlab/errors.hpp"
#include "pbrlab/hamiltonian.hpp"
#include "pbrlab/qstate.hpp"
#include "pbrlab/rng.hpp"

namespace pbrlab {

inline constexpr double kOrthogonalityTol = 1e-12;
inline constexpr double kConstraintTol = 1e-10;

using Probabilities = std::array<double, 4>;

/// One of the four product states. Alice prepares her first or second state
/// (u or v), Bob his first or second (u, then vbar or w).
struct Preparation {
    std::string label;
    std::string alice;
    std::string bob;
    JointState state;
};

/// Outcome index (0-based) forbidden by each preparation, as predicted for
/// the variant: XYZ u.u -> e_4, u.vbar -> e_2, v.u -> e_3, v.vbar -> e_1;
/// SOC u.u -> e'_2, u.w -> e'_4, v.u -> e'_3, v.w -> e'_1.
inline std::array<int, 4> expected_forbidden(Variant v) {
    return v == Variant::Xyz ? std::array<int, 4>{3, 1, 2, 0} : std::array<int, 4>{1, 3, 2, 0};
}

inline std::array<Preparation, 4> make_preparations(Variant variant, const OverlapParams& p) {
    PureState u, v, x;
    std::string x_name;
    if (variant == Variant::Xyz) {
        const auto pair = build_pair_xyz(p);
        u = pair.u;
        v = pair.v;
        x = pair.vbar;
        x_name = "vbar";
    } else {
        const auto pair = build_pair_soc(p);
        u = pair.u;
        v = pair.v;
        x = pair.w;
        x_name = "w";
    }
    auto prep = [](const std::string& a, const PureState& sa, const std::string& b, const PureState& sb) {
        return Preparation{a + "*" + b, a, b, tensor(sa, sb)};
    };
    return {prep("u", u, "u", u), prep("u", u, x_name, x), prep("v", v, "u", u), prep("v", v, x_name, x)};
}

/// |<e_k|prep>|^2 for k = 1..4 in spectrum label order.
inline Probabilities born_probabilities(const JointState& prep, const Spectrum& spectrum) {
    Probabilities p{};
    for (std::size_t k = 0; k < 4; ++k) p[k] = std::norm(overlap(spectrum.eigenvectors[k], prep));
    return p;
}

/// |<e_f|prep>| for the predicted forbidden outcome f of each preparation.
inline std::array<double, 4> orthogonality_residuals(Variant variant,
                                                     const std::array<Preparation, 4>& preps,
                                                     const Spectrum& spectrum) {
    const auto f = expected_forbidden(variant);
    std::array<double, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) r[i] = std::abs(overlap(spectrum.eigenvectors[f[i]], preps[i].state));
    return r;
}

struct ProtocolInstance {
    Variant variant;
    OverlapParams params;
    CouplingSet couplings;
    Spectrum spectrum;
    std::array<Preparation, 4> preparations;
    std::array<int, 4> forbidden{};  // preparation index -> outcome index
    std::array<double, 4> residuals{};
    double constraint_residual = 0.0;  // |cos(alpha + theta)|, SOC only

    [[nodiscard]] std::string outcome_name(int k) const { return spectrum.label_name(static_cast<std::size_t>(k)); }
};

inline bool is_bijection(const std::array<int, 4>& m) {
    std::array<bool, 4> hit{};
    for (int k : m) {
        if (k < 0 || k > 3 || hit[k]) return false;
        hit[k] = true;
    }
    return true;
}

/// Builds and verifies an instance. Each forbidden outcome is found by
/// scanning the eigenbasis for the (unique) vanishing amplitude and is then
/// checked against the predicted map.
inline ProtocolInstance make_protocol(Variant variant, const OverlapParams& params, const CouplingSet& couplings,
                                      double gap_tol = kGapTol) {
    ProtocolInstance inst{variant, params, couplings, analytic_spectrum(variant, couplings, gap_tol),
                          make_preparations(variant, params), {}, {}, 0.0};
    if (variant == Variant::Soc) {
        inst.constraint_residual = std::abs(std::cos(*inst.spectrum.alpha + params.theta()));
        if (inst.constraint_residual > kConstraintTol) {
            throw ConstraintError("couplings violate cos(alpha + theta) = 0: |cos(alpha + theta)| = " +
                                      std::to_string(inst.constraint_residual),
                                  inst.constraint_residual);
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        int found = -1;
        for (std::size_t k = 0; k < 4; ++k) {
            if (std::abs(overlap(inst.spectrum.eigenvectors[k], inst.preparations[i].state)) <= kOrthogonalityTol) {
                if (found >= 0) {
                    throw DomainError("preparation " + inst.preparations[i].label +
                                      " is orthogonal to two outcomes at tolerance; theta too close to 0 or pi/2");
                }
                found = static_cast<int>(k);
            }
        }
        inst.forbidden[i] = found;
    }
    inst.residuals = orthogonality_residuals(variant, inst.preparations, inst.spectrum);
    const auto expected = expected_forbidden(variant);
    for (std::size_t i = 0; i < 4; ++i) {
        if (inst.forbidden[i] != expected[i]) {
            throw ConstraintError("preparation " + inst.preparations[i].label + " is not orthogonal to " +
                                      inst.outcome_name(expected[i]) +
                                      " (residual " + std::to_string(inst.residuals[i]) + ")",
                                  inst.residuals[i]);
        }
    }
    if (!is_bijection(inst.forbidden)) throw LogicError("forbidden map is not a bijection");
    return inst;
}

enum class PrepPolicy { UniformRandom, RoundRobin };

inline const char* policy_name(PrepPolicy p) { return p == PrepPolicy::UniformRandom ? "uniform" : "roundrobin"; }

struct TallyTable {
    std::array<std::array<std::uint64_t, 4>, 4> counts{};  // [preparation][outcome]
    std::array<std::string, 4> preparation_labels;
    std::array<std::string, 4> outcome_labels;
    std::array<int, 4> forbidden{};
    std::uint64_t n_runs = 0;
    std::uint64_t seed = 0;
    double noise_eps = 0.0;
    PrepPolicy policy = PrepPolicy::RoundRobin;

    [[nodiscard]] std::uint64_t runs_for(std::size_t prep) const {
        std::uint64_t s = 0;
        for (auto c : counts[prep]) s += c;
        return s;
    }

    friend bool operator==(const TallyTable&, const TallyTable&) = default;
};

struct SimulationOptions {
    unsigned workers = 1;  // 0 = hardware concurrency
};

namespace detail {

/// Born weights at or below this are rounding residue of an exact zero and are
/// never sampled.
inline constexpr double kZeroWeight = 1e-20;

struct Sampler {
    std::array<Probabilities, 4> cumulative{};
    std::array<int, 4> last_nonzero{};
};

inline Sampler make_sampler(const ProtocolInstance& inst) {
    Sampler s;
    for (std::size_t i = 0; i < 4; ++i) {
        auto p = born_probabilities(inst.preparations[i].state, inst.spectrum);
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            if (p[k] <= kZeroWeight) p[k] = 0.0;
            total += p[k];
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            acc += p[k] / total;
            s.cumulative[i][k] = acc;
            if (p[k] > 0.0) s.last_nonzero[i] = static_cast<int>(k);
        }
    }
    return s;
}

inline void simulate_range(const Sampler& sm, std::uint64_t first, std::uint64_t last, std::uint64_t seed,
                           double noise_eps, PrepPolicy policy,
                           std::array<std::array<std::uint64_t, 4>, 4>& counts) {
    for (std::uint64_t run = first; run < last; ++run) {
        const CounterRng rng(seed, run);
        const std::size_t prep = policy == PrepPolicy::RoundRobin
                                     ? static_cast<std::size_t>(run % 4)
                                     : static_cast<std::size_t>(rng.bits(0) >> 62);
        const double u = rng.uniform(1);
        int outcome = sm.last_nonzero[prep];
        for (int k = 0; k < 4; ++k) {
            if (u < sm.cumulative[prep][k]) {
                outcome = k;
                break;
            }
        }
        if (noise_eps > 0.0 && rng.uniform(2) < noise_eps) outcome = static_cast<int>(rng.bits(3) >> 62);
        ++counts[prep][outcome];
    }
}

}  // namespace detail

/// Each run picks a preparation by policy, samples an outcome from the Born
/// distribution and, with probability noise_eps, replaces it by a uniformly
/// random outcome. Run r draws only from stream r of the seed, so the table
/// is the same for any worker count.
inline TallyTable simulate(const ProtocolInstance& inst, std::uint64_t n_runs, std::uint64_t seed,
                           double noise_eps = 0.0, PrepPolicy policy = PrepPolicy::RoundRobin,
                           const SimulationOptions& opt = {}) {
    if (n_runs < 1) throw ValidationError("simulate: n_runs must be at least 1");
    if (!(noise_eps >= 0.0 && noise_eps <= 1.0)) throw ValidationError("simulate: noise_eps must lie in [0, 1]");

    TallyTable t;
    t.n_runs = n_runs;
    t.seed = seed;
    t.noise_eps = noise_eps;
    t.policy = policy;
    t.forbidden = inst.forbidden;
    for (std::size_t i = 0; i < 4; ++i) {
        t.preparation_labels[i] = inst.preparations[i].label;
        t.outcome_labels[i] = inst.spectrum.label_name(i);
    }

    const auto sampler = detail::make_sampler(inst);
    unsigned workers = opt.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.workers;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_runs));

    std::vector<std::array<std::array<std::uint64_t, 4>, 4>> partial(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = n_runs / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = w * chunk;
        const std::uint64_t last = w + 1 == workers ? n_runs : first + chunk;
        if (workers == 1) {
            detail::simulate_range(sampler, first, last, seed, noise_eps, policy, partial[w]);
        } else {
            pool.emplace_back(detail::simulate_range, std::cref(sampler), first, last, seed, noise_eps, policy,
                              std::ref(partial[w]));
        }
    }
    for (auto& th : pool) th.join();
    for (const auto& part : partial)
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t k = 0; k < 4; ++k) t.counts[i][k] += part[i][k];
    return t;
}

struct ForbiddenRate {
    std::array<double, 4> per_preparation{};
    double eps_hat = 0.0;
};

/// Per-preparation frequency of the forbidden outcome and its maximum.
/// Preparations that received no runs contribute 0.
inline ForbiddenRate forbidden_rate(const TallyTable& t) {
    if (t.n_runs == 0) throw ValidationError("forbidden_rate: empty tally table");
    ForbiddenRate r;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto runs = t.runs_for(i);
        if (runs == 0) continue;
        r.per_preparation[i] =
            static_cast<double>(t.counts[i][static_cast<std::size_t>(t.forbidden[i])]) / static_cast<double>(runs);
        r.eps_hat = std::max(r.eps_hat, r.per_preparation[i]);
    }
    return r;
}

}  // namespace pbrlab
