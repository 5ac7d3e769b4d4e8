#pragma once

// JSON and CSV encodings. Complex numbers are [re, im] pairs; matrices are
// row-major. Doubles are written in shortest round-trip form.

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "pbrlab/coupling_solver.hpp"
#include "pbrlab/hamiltonian.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/protocol.hpp"
#include "pbrlab/qstate.hpp"

namespace pbrlab::io {

using Json = nlohmann::ordered_json;

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const PureState& s) { return Json::array({to_json(s.amp_plus), to_json(s.amp_minus)}); }

inline Json to_json(const JointState& s) {
    Json j = Json::array();
    for (const auto& a : s.amps) j.push_back(to_json(a));
    return j;
}

inline PureState pure_state_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("pure state must be an array of two [re, im] pairs");
    auto c = [](const Json& p) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ValidationError("complex amplitude must be [re, im]");
        }
        return cplx{p[0].get<double>(), p[1].get<double>()};
    };
    return {c(j[0]), c(j[1])};
}

inline Json to_json(const HamiltonianMatrix& m) {
    Json rows = Json::array();
    for (const auto& row : m.entries) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(to_json(x));
        rows.push_back(r);
    }
    return rows;
}

inline Json to_json(const CouplingSet& c) { return Json{{"a", c.a}, {"b", c.b}, {"c", c.c}, {"d", c.d}}; }

inline Json to_json(const Spectrum& s) {
    Json j;
    j["labels"] = Json::array();
    j["eigenvalues"] = Json::array();
    j["eigenvectors"] = Json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        j["labels"].push_back(s.label_name(i));
        j["eigenvalues"].push_back(s.eigenvalues[i]);
        j["eigenvectors"].push_back(to_json(s.eigenvectors[i]));
    }
    j["alpha"] = s.alpha ? Json(*s.alpha) : Json(nullptr);
    return j;
}

inline Json to_json(const SolverResult& r) {
    Json j{{"couplings", to_json(r.couplings)},
           {"a_plus_c", r.couplings.a + r.couplings.c},
           {"alpha", r.alpha},
           {"residual", r.residual},
           {"degenerate", r.degenerate}};
    if (r.degenerate) j["degeneracy"] = r.degeneracy;
    return j;
}

inline Json instance_echo(const ProtocolInstance& inst) {
    Json j;
    j["variant"] = variant_name(inst.variant);
    j["theta"] = inst.params.theta();
    j["phi"] = inst.params.phi();
    j["couplings"] = to_json(inst.couplings);
    j["spectrum"] = to_json(inst.spectrum);
    Json preps = Json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        preps.push_back(Json{{"label", inst.preparations[i].label},
                             {"state", to_json(inst.preparations[i].state)},
                             {"forbidden", inst.outcome_name(inst.forbidden[i])},
                             {"residual", inst.residuals[i]}});
    }
    j["preparations"] = preps;
    if (inst.variant == Variant::Soc) j["constraint_residual"] = inst.constraint_residual;
    return j;
}

/// Columns: preparation, outcome, count, frequency, is_forbidden. The
/// frequency is relative to the runs assigned to that preparation.
inline void write_tally_csv(std::ostream& os, const TallyTable& t) {
    os << "preparation,outcome,count,frequency,is_forbidden\n";
    for (std::size_t i = 0; i < 4; ++i) {
        const auto runs = t.runs_for(i);
        for (std::size_t k = 0; k < 4; ++k) {
            const double f = runs == 0 ? 0.0 : static_cast<double>(t.counts[i][k]) / static_cast<double>(runs);
            os << t.preparation_labels[i] << ',' << t.outcome_labels[k] << ',' << t.counts[i][k] << ','
               << fmt_double(f) << ',' << (t.forbidden[i] == static_cast<int>(k) ? "true" : "false") << '\n';
        }
    }
}

inline Json tally_summary(const ProtocolInstance& inst, const TallyTable& t) {
    const auto rate = forbidden_rate(t);
    Json j;
    j["instance"] = instance_echo(inst);
    j["n_runs"] = t.n_runs;
    j["seed"] = t.seed;
    j["noise_eps"] = t.noise_eps;
    j["policy"] = policy_name(t.policy);
    Json rows = Json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        Json counts = Json::array();
        for (auto c : t.counts[i]) counts.push_back(c);
        rows.push_back(Json{{"preparation", t.preparation_labels[i]},
                            {"runs", t.runs_for(i)},
                            {"counts", counts},
                            {"forbidden_outcome", t.outcome_labels[static_cast<std::size_t>(t.forbidden[i])]},
                            {"forbidden_frequency", rate.per_preparation[i]}});
    }
    j["preparations"] = rows;
    j["eps_hat"] = rate.eps_hat;
    j["overlap_bound"] = overlap_bound(rate.eps_hat);
    return j;
}

inline Json to_json(const FeasibilityReport& r) {
    Json j;
    j["feasible"] = r.feasible;
    j["constraints"] = r.constraint_tags;
    if (r.feasible) {
        j["witness"] = r.witness;
    } else {
        Json cert = Json::array();
        for (std::size_t i = 0; i < r.certificate.size(); ++i) {
            cert.push_back(Json{{"constraint", r.constraint_tags[i]}, {"multiplier", r.certificate[i]}});
        }
        j["certificate"] = cert;
    }
    return j;
}

inline Json to_json(const Verdict& v) {
    Json pairs = Json::array();
    for (const auto& p : v.pairs) pairs.push_back(Json::array({p.first, p.second}));
    Json variants = Json::array();
    for (auto x : v.provenance.variants) variants.push_back(variant_name(x));
    return Json{{"relation", relation_name(v.relation)},
                {"pairs", pairs},
                {"provenance", Json{{"variants", variants}, {"theta", v.provenance.theta}, {"chain", v.provenance.chain}}}};
}

}  // namespace pbrlab::io
