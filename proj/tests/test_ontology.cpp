#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pbrlab/coupling_solver.hpp"
#include "pbrlab/ontology.hpp"
#include "support/oracles.hpp"

using namespace pbrlab;
using Catch::Approx;
using std::numbers::pi;

namespace {

ProtocolInstance xyz_inst(double theta = pi / 3) {
    return make_protocol(Variant::Xyz, OverlapParams::make(theta), {1, 2, 3});
}

ProtocolInstance soc_quarter() { return make_protocol(Variant::Soc, OverlapParams::make(pi / 4), {1, 0.5, -1, 1}); }

std::size_t count_zero_rows(const lp::Problem& p) {
    std::size_t n = 0;
    for (const auto& c : p.constraints)
        if (c.relation == lp::Relation::Eq && c.rhs == 0.0) ++n;
    return n;
}

}  // namespace

TEST_CASE("both-overlap problem pins every outcome", "[ontology]") {
    const auto fp = build_problem(xyz_inst(), SupportProfile::both());
    CHECK(fp.preparations == std::vector<int>{0, 1, 2, 3});
    CHECK(fp.zeroed == std::vector<int>{3, 1, 2, 0});
    CHECK(count_zero_rows(fp.lp) == 4);
    CHECK(fp.lp.constraints.size() == 9);
    CHECK(fp.lp.constraints[0].tag.find("u*u") != std::string::npos);

    const auto r = lp_feasible(fp);
    CHECK_FALSE(r.feasible);
    CHECK(r.witness.empty());
    REQUIRE(r.certificate.size() == fp.lp.constraints.size());
    CHECK(lp::is_farkas_certificate(fp.lp, r.certificate, 1e-9));
}

TEST_CASE("single-overlap problems stay feasible", "[ontology]") {
    const auto inst = xyz_inst();
    SECTION("Alice only, Bob fixed to u") {
        const auto fp = build_problem(inst, SupportProfile::alice_only(0));
        // u*u and v*u
        CHECK(fp.preparations == std::vector<int>{0, 2});
        CHECK(fp.zeroed == std::vector<int>{3, 2});
        const auto r = lp_feasible(fp);
        CHECK(r.feasible);
        REQUIRE(r.witness.size() == 4);
        CHECK(r.witness[0] == Approx(0.5));
        CHECK(r.witness[1] == Approx(0.5));
        CHECK(r.witness[2] == 0.0);
        CHECK(r.witness[3] == 0.0);
        CHECK(lp::max_violation(fp.lp, r.vertex) <= 1e-9);
    }
    SECTION("Alice only, Bob fixed to the second state") {
        const auto fp = build_problem(inst, SupportProfile::alice_only(1));
        CHECK(fp.zeroed == std::vector<int>{1, 0});
        CHECK(lp_feasible(fp).feasible);
    }
    SECTION("Bob only") {
        const auto fp = build_problem(inst, SupportProfile::bob_only(1));
        CHECK(fp.preparations == std::vector<int>{2, 3});
        CHECK(lp_feasible(fp).feasible);
    }
}

TEST_CASE("problem construction validation", "[ontology]") {
    const auto inst = xyz_inst();
    CHECK_THROWS_AS(build_problem(inst, SupportProfile{}), ValidationError);
    CHECK_THROWS_AS(build_problem(inst, SupportProfile::both(0.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(build_problem(inst, SupportProfile::both(1.0, 1.5)), ValidationError);
    CHECK_THROWS_AS(build_problem(inst, SupportProfile::alice_only(2)), ValidationError);

    lp::Problem bad;
    bad.num_vars = 4;
    bad.constraints.push_back({{1.0, 1.0}, lp::Relation::Eq, 1.0, "short row"});
    CHECK_THROWS_AS(lp_feasible(bad), ValidationError);
}

TEST_CASE("no zeroed outcomes gives a uniform witness", "[ontology]") {
    lp::Problem p;
    p.num_vars = 4;
    p.constraints.push_back({{1, 1, 1, 1}, lp::Relation::Eq, 1.0, "sum"});
    const auto r = lp_feasible(p);
    CHECK(r.feasible);
    for (double w : r.witness) CHECK(w == Approx(0.25));
}

TEST_CASE("simplex agrees with the subset rule on random zero sets", "[ontology][property]") {
    std::mt19937_64 gen(4242);
    for (int i = 0; i < 1000; ++i) {
        lp::Problem p;
        p.num_vars = 4;
        std::array<bool, 4> zero{};
        const int rows = static_cast<int>(gen() % 7);
        for (int r = 0; r < rows; ++r) {
            const auto k = static_cast<std::size_t>(gen() % 4);
            zero[k] = true;
            std::vector<double> coeffs(4, 0.0);
            coeffs[k] = 0.5 + static_cast<double>(gen() % 4);
            p.constraints.push_back({coeffs, lp::Relation::Eq, 0.0, "zero"});
        }
        p.constraints.push_back({{1, 1, 1, 1}, lp::Relation::Eq, 1.0, "sum"});
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<double> coeffs(4, 0.0);
            coeffs[k] = 1.0;
            p.constraints.push_back({coeffs, lp::Relation::Le, 1.0, "cap"});
        }
        const bool expected = !(zero[0] && zero[1] && zero[2] && zero[3]);
        const auto sol = lp::solve_feasibility(p);
        CHECK(sol.feasible == expected);
        if (sol.feasible) {
            CHECK(lp::max_violation(p, sol.point) <= 1e-9);
        } else {
            CHECK(lp::is_farkas_certificate(p, sol.certificate));
        }
        CHECK(lp_feasible(p).feasible == expected);
    }
}

TEST_CASE("simplex on general small systems", "[ontology][simplex]") {
    SECTION("feasible mixed relations") {
        lp::Problem p;
        p.num_vars = 2;
        p.constraints.push_back({{1, 1}, lp::Relation::Ge, 1.0, "x+y>=1"});
        p.constraints.push_back({{1, -1}, lp::Relation::Le, 0.0, "x<=y"});
        p.constraints.push_back({{0, 1}, lp::Relation::Le, 2.0, "y<=2"});
        const auto s = lp::solve_feasibility(p);
        REQUIRE(s.feasible);
        CHECK(lp::max_violation(p, s.point) <= 1e-9);
    }
    SECTION("infeasible with Ge and Le rows") {
        lp::Problem p;
        p.num_vars = 2;
        p.constraints.push_back({{1, 1}, lp::Relation::Ge, 3.0, "x+y>=3"});
        p.constraints.push_back({{1, 0}, lp::Relation::Le, 1.0, "x<=1"});
        p.constraints.push_back({{0, 1}, lp::Relation::Le, 1.0, "y<=1"});
        const auto s = lp::solve_feasibility(p);
        CHECK_FALSE(s.feasible);
        CHECK(lp::is_farkas_certificate(p, s.certificate));
    }
    SECTION("negative right-hand side") {
        lp::Problem p;
        p.num_vars = 1;
        p.constraints.push_back({{-1}, lp::Relation::Eq, -0.5, "-x=-0.5"});
        const auto s = lp::solve_feasibility(p);
        REQUIRE(s.feasible);
        CHECK(s.point[0] == Approx(0.5));
    }
    SECTION("certificate check rejects wrong multipliers") {
        lp::Problem p;
        p.num_vars = 1;
        p.constraints.push_back({{1}, lp::Relation::Eq, 0.0, "x=0"});
        p.constraints.push_back({{1}, lp::Relation::Eq, 1.0, "x=1"});
        CHECK(lp::is_farkas_certificate(p, {-1.0, 1.0}));
        CHECK_FALSE(lp::is_farkas_certificate(p, {1.0, 1.0}));
        CHECK_FALSE(lp::is_farkas_certificate(p, {0.0, 0.0}));
    }
}

TEST_CASE("deduced verdicts", "[ontology]") {
    const auto xyz = xyz_inst();
    const auto vx = deduce(xyz, lp_feasible(build_problem(xyz, SupportProfile::both())));
    REQUIRE(vx.size() == 1);
    CHECK(vx[0].relation == Relation::AtLeastOneDisjoint);
    CHECK(vx[0].pairs == std::vector<StatePair>{StatePair::of("u", "v"), StatePair::of("u", "vbar")});

    const auto soc = soc_quarter();
    const auto vs = deduce(soc, lp_feasible(build_problem(soc, SupportProfile::both())));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].relation == Relation::Disjoint);
    CHECK(vs[0].pairs == std::vector<StatePair>{StatePair::of("u", "v")});
    CHECK(vs[0].provenance.theta == Approx(pi / 4));
    CHECK_FALSE(vs[0].provenance.chain.empty());

    const auto soc3 = make_protocol(Variant::Soc, OverlapParams::make(pi / 3), solve_closed_form(pi / 3, 1, 2).couplings);
    const auto v3 = deduce(soc3, lp_feasible(build_problem(soc3, SupportProfile::both())));
    CHECK(v3[0].relation == Relation::AtLeastOneDisjoint);
    CHECK(v3[0].pairs == std::vector<StatePair>{StatePair::of("u", "v"), StatePair::of("u", "w")});

    FeasibilityReport fake;
    fake.feasible = true;
    CHECK_THROWS_AS(deduce(xyz, fake), LogicError);
}

TEST_CASE("verdict consistency and entailment", "[ontology]") {
    const Verdict disjoint_uv{{StatePair::of("u", "v")}, Relation::Disjoint, {}};
    const Verdict xyz{{StatePair::of("u", "v"), StatePair::of("u", "vbar")}, Relation::AtLeastOneDisjoint, {}};
    const Verdict soc{{StatePair::of("u", "v"), StatePair::of("u", "w")}, Relation::AtLeastOneDisjoint, {}};

    CHECK(consistent({disjoint_uv}, {xyz}));
    CHECK(entails({disjoint_uv}, {xyz}));
    CHECK_FALSE(entails({xyz}, {disjoint_uv}));
    CHECK(consistent({soc}, {xyz}));
    CHECK_FALSE(entails({soc}, {xyz}));

    const Verdict possible{{StatePair::of("u", "v")}, Relation::ConjointPossible, {}};
    CHECK(consistent({possible}, {disjoint_uv}));
    CHECK(StatePair::of("v", "u") == StatePair::of("u", "v"));
}

TEST_CASE("overlap bound", "[ontology]") {
    CHECK(overlap_bound(0.0) == 0.0);
    CHECK(overlap_bound(0.01) == Approx(0.04));
    CHECK(overlap_bound(0.25) == 1.0);
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double b = overlap_bound(i / 100.0);
        CHECK(b >= prev);
        prev = b;
    }
    CHECK_THROWS_AS(overlap_bound(-0.1), ValidationError);
    CHECK_THROWS_AS(overlap_bound(1.5), ValidationError);
    CHECK_THROWS_AS(overlap_bound(NAN), ValidationError);
}

TEST_CASE("toy ontological model respects the overlap bound", "[ontology][property]") {
    const auto inst = xyz_inst();
    oracle::ToyModel m;
    m.q_a = 0.5;
    m.q_b = 0.2;
    m.shared_response = {0.1, 0.2, 0.3, 0.4};
    m.forbidden = inst.forbidden;
    for (std::size_t i = 0; i < 4; ++i) {
        m.private_response[i] = {0.25, 0.25, 0.25, 0.25};
        const auto f = static_cast<std::size_t>(inst.forbidden[i]);
        m.private_response[i][f] = 0.0;
        m.private_response[i][(f + 1) % 4] = 0.5;
    }
    const std::uint64_t n = 200'000;
    // max over preparations of the forbidden rate is at least q_a q_b / 4
    const double floor = m.q_a * m.q_b / 4;
    const double sigma = std::sqrt(floor * (1 - floor) / static_cast<double>(n));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto freq = oracle::simulate_toy(m, n, seed);
        const double eps_hat = *std::max_element(freq.begin(), freq.end());
        CHECK(eps_hat >= floor - 3 * sigma);
        CHECK(m.q_a * m.q_b <= overlap_bound(eps_hat) + 12 * sigma);
    }
}
