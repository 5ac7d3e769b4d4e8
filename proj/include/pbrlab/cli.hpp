#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or configuration error, 3 numeric failure (degeneracy,
// non-convergence).

#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbrlab/coupling_solver.hpp"
#include "pbrlab/hamiltonian.hpp"
#include "pbrlab/json_io.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/protocol.hpp"
#include "pbrlab/verify.hpp"

namespace pbrlab::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumeric = 3 };

struct RunConfig {
    std::string variant = "xyz";
    double theta = 0.0;
    double phi = 0.0;
    bool deg = false;
    CouplingSet couplings{};
    bool have_a = false, have_b = false, have_c = false, have_d = false;
    std::uint64_t runs = 1000;
    std::uint64_t seed = 42;
    double noise_eps = 0.0;
    std::string policy = "uniform";
    std::string format;
    double gap_tol = kGapTol;
    unsigned workers = 1;
    // solve
    double split = 2.0;
    std::string method = "closed";
    // feasibility / bound
    std::string overlap = "both";
    int branch = 0;
    double eps = 0.0;
    std::string summary_path;
};

/// Flat `key = value` lines; `#` and `;` start comments.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

inline bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

/// Inserts config-file values as flags right after the subcommand; flags
/// already present on the command line are left alone, so they win.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty() || args.empty()) return args;
    std::vector<std::string> injected;
    for (const auto& [key, value] : read_config_file(path)) {
        if (given_on_command_line(args, key)) continue;
        if (key == "deg") {
            if (value == "true" || value == "1" || value == "yes") injected.push_back("--deg");
            continue;
        }
        injected.push_back("--" + key);
        injected.push_back(value);
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

inline Variant parse_variant(const std::string& s) { return s == "soc" ? Variant::Soc : Variant::Xyz; }

inline double angle(double x, bool deg) { return deg ? x * std::numbers::pi / 180.0 : x; }

inline OverlapParams params(const RunConfig& c) {
    return OverlapParams::make(angle(c.theta, c.deg), angle(c.phi, c.deg));
}

/// Couplings from flags; for SOC with no a/c/d given, the closed-form
/// solution at d = 1, split = 2 (b as given, default 0.5).
inline CouplingSet couplings_for(const RunConfig& c, const OverlapParams& p) {
    if (parse_variant(c.variant) == Variant::Xyz) {
        if (c.have_a || c.have_b || c.have_c) return {c.couplings.a, c.couplings.b, c.couplings.c, 0.0};
        return {1.0, 2.0, 3.0, 0.0};
    }
    if (c.have_a || c.have_c || c.have_d) return c.couplings;
    return solve_closed_form(p.theta(), 1.0, 2.0, c.have_b ? c.couplings.b : 0.5).couplings;
}

inline void add_couplings(CLI::App* sub, RunConfig& c, bool with_d) {
    sub->add_option_function<double>("--a", [&c](double v) { c.couplings.a = v; c.have_a = true; }, "XX coupling");
    sub->add_option_function<double>("--b", [&c](double v) { c.couplings.b = v; c.have_b = true; }, "YY coupling");
    sub->add_option_function<double>("--c", [&c](double v) { c.couplings.c = v; c.have_c = true; }, "ZZ coupling");
    if (with_d) {
        sub->add_option_function<double>("--d", [&c](double v) { c.couplings.d = v; c.have_d = true; },
                                         "spin-orbit coupling (soc only)");
    }
}

inline void add_angles(CLI::App* sub, RunConfig& c, bool required_theta = true) {
    auto* t = sub->add_option("--theta", c.theta, "overlap angle, radians unless --deg");
    if (required_theta) t->required();
    sub->add_option("--phi", c.phi, "overlap phase, radians unless --deg");
    sub->add_flag("--deg", c.deg, "angles in degrees");
}

inline void add_format(CLI::App* sub, RunConfig& c, const std::string& def) {
    sub->add_option("--format", c.format, "output format (default " + def + ")")->check(CLI::IsMember({"json", "csv"}));
}

inline std::string format_or(const RunConfig& c, const char* def) { return c.format.empty() ? def : c.format; }

inline void print_json(std::ostream& out, const io::Json& j) { out << j.dump(2) << '\n'; }

inline int cmd_states(const RunConfig& c, std::ostream& out) {
    const auto p = params(c);
    std::vector<std::pair<std::string, PureState>> states;
    if (parse_variant(c.variant) == Variant::Xyz) {
        const auto s = build_pair_xyz(p);
        states = {{"u", s.u}, {"v", s.v}, {"vbar", s.vbar}};
    } else {
        const auto s = build_pair_soc(p);
        states = {{"u", s.u}, {"v", s.v}, {"w", s.w}};
    }
    const cplx uv = overlap(states[0].second, states[1].second);
    if (format_or(c, "json") == "csv") {
        out << "state,re_plus,im_plus,re_minus,im_minus\n";
        for (const auto& [name, s] : states) {
            out << name << ',' << io::fmt_double(s.amp_plus.real()) << ',' << io::fmt_double(s.amp_plus.imag()) << ','
                << io::fmt_double(s.amp_minus.real()) << ',' << io::fmt_double(s.amp_minus.imag()) << '\n';
        }
        return kOk;
    }
    io::Json j;
    j["family"] = c.variant;
    j["theta"] = p.theta();
    j["phi"] = p.phi();
    io::Json st;
    for (const auto& [name, s] : states) st[name] = io::to_json(s);
    j["states"] = st;
    j["overlap_uv"] = io::to_json(uv);
    j["fidelity_uv"] = std::norm(uv);
    j["overlap_v_second"] = io::to_json(overlap(states[1].second, states[2].second));
    print_json(out, j);
    return kOk;
}

inline int cmd_spectrum(const RunConfig& c, std::ostream& out) {
    const Variant v = parse_variant(c.variant);
    CouplingSet k = c.couplings;
    if (v == Variant::Xyz && k.d != 0.0) throw ValidationError("--d is only valid with --variant soc");
    const auto h = build(v, k);
    const auto an = analytic_spectrum(v, k, c.gap_tol);
    const auto nu = numeric_spectrum(h, c.gap_tol);
    const auto m = match_spectra(an, nu);
    if (format_or(c, "csv") == "csv") {
        out << "label,analytic_E,numeric_E,abs_diff\n";
        for (std::size_t i = 0; i < 4; ++i) {
            const double ne = nu.eigenvalues[m.index[i]];
            out << an.label_name(i) << ',' << io::fmt_double(an.eigenvalues[i]) << ',' << io::fmt_double(ne) << ','
                << io::fmt_double(std::abs(an.eigenvalues[i] - ne)) << '\n';
        }
        return kOk;
    }
    io::Json j;
    j["variant"] = c.variant;
    j["couplings"] = io::to_json(k);
    j["matrix"] = io::to_json(h);
    j["analytic"] = io::to_json(an);
    j["numeric"] = io::to_json(nu);
    j["max_eigenvalue_diff"] = m.max_eigenvalue_diff;
    j["min_fidelity"] = m.min_fidelity;
    print_json(out, j);
    return kOk;
}

inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const double theta = angle(c.theta, c.deg);
    const double b = c.have_b ? c.couplings.b : 0.0;
    const auto r = c.method == "bisect" ? solve_by_root_finding(theta, c.couplings.d, c.split, b)
                                        : solve_closed_form(theta, c.couplings.d, c.split, b);
    if (r.degenerate) err << "warning: " << r.degeneracy << '\n';
    print_json(out, io::to_json(r));
    return kOk;
}

inline int cmd_run(const RunConfig& c, std::ostream& out) {
    const auto p = params(c);
    const auto inst = make_protocol(parse_variant(c.variant), p, couplings_for(c, p), c.gap_tol);
    const auto policy = c.policy == "roundrobin" ? PrepPolicy::RoundRobin : PrepPolicy::UniformRandom;
    const auto t = simulate(inst, c.runs, c.seed, c.noise_eps, policy, {c.workers});
    if (!c.summary_path.empty()) {
        std::ofstream f(c.summary_path);
        if (!f) throw ValidationError("cannot write summary to '" + c.summary_path + "'");
        f << io::tally_summary(inst, t).dump(2) << '\n';
    }
    if (format_or(c, "csv") == "json") {
        print_json(out, io::tally_summary(inst, t));
    } else {
        io::write_tally_csv(out, t);
    }
    return kOk;
}

inline int cmd_feasibility(const RunConfig& c, std::ostream& out) {
    const auto p = params(c);
    const auto inst = make_protocol(parse_variant(c.variant), p, couplings_for(c, p), c.gap_tol);
    SupportProfile prof;
    if (c.overlap == "both") {
        prof = SupportProfile::both();
    } else if (c.overlap == "a") {
        prof = SupportProfile::alice_only(c.branch);
    } else {
        prof = SupportProfile::bob_only(c.branch);
    }
    const auto report = lp_feasible(build_problem(inst, prof));
    io::Json j;
    j["variant"] = c.variant;
    j["theta"] = p.theta();
    j["overlap"] = c.overlap;
    if (c.overlap != "both") j["branch"] = c.branch;
    const auto body = io::to_json(report);
    for (const auto& [k, v] : body.items()) j[k] = v;
    if (c.overlap == "both") {
        io::Json verdicts = io::Json::array();
        for (const auto& v : deduce(inst, report)) verdicts.push_back(io::to_json(v));
        j["verdicts"] = verdicts;
    }
    print_json(out, j);
    return kOk;
}

inline int cmd_bound(const RunConfig& c, std::ostream& out) {
    print_json(out, io::Json{{"eps_hat", c.eps}, {"bound", overlap_bound(c.eps)}});
    return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
    verify::Options o;
    o.seed = c.seed;
    o.workers = c.workers;
    const auto results = verify::run_all(o);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    if (c.format == "json") {
        io::Json j;
        j["seed"] = c.seed;
        io::Json arr = io::Json::array();
        for (const auto& r : results) {
            arr.push_back(io::Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
        }
        j["criteria"] = arr;
        j["passed"] = ok;
        print_json(out, j);
    } else {
        out << verify::report(o, results);
    }
    return ok ? kOk : kVerificationFailed;
}

}  // namespace detail

/// Entry point; all results go to `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    RunConfig cfg;
    CLI::App app{"pbrlab: two-qubit PBR-style protocol laboratory", "pbrlab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto* states = app.add_subcommand("states", "print the state families and their overlaps");
    add_angles(states, cfg);
    states->add_option("--family", cfg.variant, "state family")->check(CLI::IsMember({"xyz", "soc"}));
    add_format(states, cfg, "json");

    auto* spectrum = app.add_subcommand("spectrum", "analytic vs numeric eigenvalues of a Hamiltonian");
    spectrum->add_option("--variant", cfg.variant)->check(CLI::IsMember({"xyz", "soc"}));
    add_couplings(spectrum, cfg, true);
    spectrum->add_option("--gap-tol", cfg.gap_tol, "minimum eigenvalue gap")->check(CLI::NonNegativeNumber);
    add_format(spectrum, cfg, "csv");

    auto* solve = app.add_subcommand("solve", "spin-orbit couplings with cos(alpha + theta) = 0");
    solve->add_option("--theta", cfg.theta)->required();
    solve->add_flag("--deg", cfg.deg, "angles in degrees");
    solve->add_option_function<double>("--d", [&cfg](double v) { cfg.couplings.d = v; cfg.have_d = true; })->required();
    solve->add_option("--split", cfg.split, "a - c")->required();
    solve->add_option_function<double>("--b", [&cfg](double v) { cfg.couplings.b = v; cfg.have_b = true; }, "YY coupling (default 0)");
    solve->add_option("--method", cfg.method)->check(CLI::IsMember({"closed", "bisect"}));

    auto* run = app.add_subcommand("run", "Monte Carlo runs of a protocol");
    run->add_option("--variant", cfg.variant)->check(CLI::IsMember({"xyz", "soc"}));
    add_angles(run, cfg);
    add_couplings(run, cfg, true);
    run->add_option("--runs", cfg.runs)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    run->add_option("--seed", cfg.seed);
    run->add_option("--noise", cfg.noise_eps, "outcome-flip probability")->check(CLI::Range(0.0, 1.0));
    run->add_option("--policy", cfg.policy)->check(CLI::IsMember({"uniform", "roundrobin"}));
    run->add_option("--workers", cfg.workers)->check(CLI::Range(1u, 256u));
    run->add_option("--gap-tol", cfg.gap_tol)->check(CLI::NonNegativeNumber);
    run->add_option("--summary", cfg.summary_path, "also write the JSON summary to this file");
    add_format(run, cfg, "csv");

    auto* feas = app.add_subcommand("feasibility", "response LP for a shared ontic state");
    feas->add_option("--variant", cfg.variant)->check(CLI::IsMember({"xyz", "soc"}));
    add_angles(feas, cfg);
    add_couplings(feas, cfg, true);
    feas->add_option("--overlap", cfg.overlap)->check(CLI::IsMember({"a", "b", "both"}));
    feas->add_option("--branch", cfg.branch, "fixed state on the non-overlapping side")->check(CLI::Range(0, 1));
    feas->add_option("--gap-tol", cfg.gap_tol)->check(CLI::NonNegativeNumber);

    auto* bound = app.add_subcommand("bound", "upper bound on q_a q_b from a forbidden-outcome rate");
    bound->add_option("--eps", cfg.eps)->required();

    auto* verify_all = app.add_subcommand("verify-all", "run the full acceptance sweep");
    verify_all->add_option("--seed", cfg.seed);
    verify_all->add_option("--workers", cfg.workers)->check(CLI::Range(1u, 256u));
    verify_all->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));

    try {
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*states) return cmd_states(cfg, out);
        if (*spectrum) return cmd_spectrum(cfg, out);
        if (*solve) return cmd_solve(cfg, out, err);
        if (*run) return cmd_run(cfg, out);
        if (*feas) return cmd_feasibility(cfg, out);
        if (*bound) return cmd_bound(cfg, out);
        if (*verify_all) return cmd_verify(cfg, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DegeneracyError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const ConstraintError& e) {
        err << "verification failed: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const LogicError& e) {
        err << "verification failed: " << e.what() << '\n';
        return kVerificationFailed;
    }
    return kUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace pbrlab::cli
