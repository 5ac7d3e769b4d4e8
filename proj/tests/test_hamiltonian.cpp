#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pbrlab/hamiltonian.hpp"
#include "support/oracles.hpp"

using namespace pbrlab;
using Catch::Approx;

namespace {

double max_entry_diff(const Mat4& x, const Mat4& y) {
    double m = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m = std::max(m, std::abs(x[r][c] - y[r][c]));
    return m;
}

}  // namespace

TEST_CASE("builders match hand-written matrices", "[hamiltonian]") {
    CHECK(max_entry_diff(build_xyz({0, 0, 0}).entries, Mat4{}) == 0.0);

    const auto xx = build_xyz({1, 0, 0}).entries;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) CHECK(xx[r][c] == cplx(r + c == 3 ? 1.0 : 0.0));

    const auto h = build_xyz({1, 2, 3}).entries;
    CHECK(h[0][0] == cplx(3));
    CHECK(h[1][1] == cplx(-3));
    CHECK(h[2][2] == cplx(-3));
    CHECK(h[3][3] == cplx(3));
    CHECK(h[0][3] == cplx(-1));
    CHECK(h[1][2] == cplx(3));
    CHECK(h[2][1] == cplx(3));
    CHECK(h[3][0] == cplx(-1));

    const auto d = build_soc({0, 0, 0, 1}).entries;
    // |++> -> |-+> - |+->
    CHECK(d[2][0] == cplx(1));
    CHECK(d[1][0] == cplx(-1));
    CHECK(d[0][0] == cplx(0));
    CHECK(d[3][0] == cplx(0));

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double a = u(gen), b = u(gen), c = u(gen), dd = u(gen);
        CHECK(max_entry_diff(build_soc({a, b, c, dd}).entries, oracle::soc_by_hand(a, b, c, dd)) <= 1e-15);
    }
}

TEST_CASE("builders are Hermitian and traceless", "[hamiltonian][property]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 500; ++i) {
        const CouplingSet k{u(gen), u(gen), u(gen), u(gen)};
        const auto soc = build_soc(k);
        CHECK(soc.is_hermitian(0.0));
        CHECK(soc.trace() == cplx{});
        const auto xyz = build_xyz({k.a, k.b, k.c});
        CHECK(xyz.is_hermitian(0.0));
        CHECK(max_entry_diff(build_soc({k.a, k.b, k.c, 0.0}).entries, xyz.entries) == 0.0);
    }
    CHECK_THROWS_AS(build_xyz({1, 2, 3, 1}), ValidationError);
}

TEST_CASE("xyz analytic spectrum", "[hamiltonian]") {
    const auto s = analytic_spectrum_xyz({1, 2, 3});
    CHECK(s.eigenvalues == std::array<double, 4>{2, 4, 0, -6});
    CHECK_FALSE(s.alpha.has_value());
    CHECK(s.label_name(0) == "e_1");
    const auto h = build_xyz({1, 2, 3});
    CHECK(max_residual(h, s) <= 1e-15);
    for (double e : s.eigenvalues) CHECK(oracle::char_poly_abs(h.entries, e) <= 1e-12);

    CHECK_THROWS_AS(analytic_spectrum_xyz({1, 1, 0}), DegeneracyError);
    CHECK_THROWS_AS(analytic_spectrum_xyz({1, -1, 0}), DegeneracyError);
    // a != +-b is not enough: E_1 = E_3 = 1
    CHECK_THROWS_WITH(analytic_spectrum_xyz({1, 2, 2}), Catch::Matchers::ContainsSubstring("E_1") &&
                                                           Catch::Matchers::ContainsSubstring("E_3"));
}

TEST_CASE("spin-orbit analytic spectrum", "[hamiltonian]") {
    const auto s = analytic_spectrum_soc({1, 0.5, -1, 1});
    CHECK(s.eigenvalues[0] == Approx(-1.5));
    CHECK(s.eigenvalues[1] == Approx(2.5));
    CHECK(s.eigenvalues[2] == Approx(-2.5));
    CHECK(s.eigenvalues[3] == Approx(1.5));
    CHECK(*s.alpha == Approx(std::numbers::pi / 4));
    CHECK(s.label_name(2) == "e'_3");
    const auto h = build_soc({1, 0.5, -1, 1});
    CHECK(max_residual(h, s) <= 1e-14);
    CHECK(orthonormality_error(s) <= 1e-15);

    // (a + c + sqrt((a+c)^2 + 4)) / 2 = (-2/sqrt3 + 4/sqrt3) / 2 = 1/sqrt3
    const double sum = -2 / std::sqrt(3.0);
    CHECK(*analytic_spectrum_soc({sum / 2 + 1, 0.3, sum / 2 - 1, 1}).alpha == Approx(std::numbers::pi / 6));

    CHECK_THROWS_AS(analytic_spectrum_soc({0, 0, 0, 1}), DegeneracyError);
    CHECK_THROWS_AS(analytic_spectrum_soc({1, 0, 2, 0}), DomainError);
    CHECK_THROWS_AS(analytic_spectrum_soc({1, 0, 1, 1}), DegeneracyError);
}

TEST_CASE("mixing angle branch and d < 0", "[hamiltonian]") {
    CHECK(mixing_angle(0.0, 1.0) == Approx(std::numbers::pi / 4));
    CHECK(mixing_angle(0.0, -1.0) == Approx(-std::numbers::pi / 4));
    CHECK(mixing_angle(-1e12, 1.0) > 0.0);  // no cancellation to zero
    CHECK(mixing_angle(-1e12, 1.0) == Approx(1e-12).epsilon(1e-6));
    const auto s = analytic_spectrum_soc({0.4, 0.1, -1.3, -0.7});
    CHECK(*s.alpha < 0.0);
    CHECK(max_residual(build_soc({0.4, 0.1, -1.3, -0.7}), s) <= 1e-14);
}

TEST_CASE("Jacobi eigensolver", "[hamiltonian]") {
    SECTION("zero matrix with gap check off") {
        const auto s = numeric_spectrum(build_xyz({0, 0, 0}), 0.0);
        for (double e : s.eigenvalues) CHECK(e == 0.0);
        CHECK_THROWS_AS(numeric_spectrum(build_xyz({0, 0, 0})), DegeneracyError);
    }
    SECTION("xyz (1,2,3)") {
        const auto s = numeric_spectrum(build_xyz({1, 2, 3}));
        CHECK(s.eigenvalues[0] == Approx(-6).margin(1e-13));
        CHECK(s.eigenvalues[1] == Approx(0).margin(1e-13));
        CHECK(s.eigenvalues[2] == Approx(2).margin(1e-13));
        CHECK(s.eigenvalues[3] == Approx(4).margin(1e-13));
        const auto m = match_spectra(analytic_spectrum_xyz({1, 2, 3}), s);
        CHECK(m.index == std::array<std::size_t, 4>{2, 3, 1, 0});
        CHECK(m.min_fidelity >= 1 - 1e-14);
    }
    SECTION("non-Hermitian input") {
        HamiltonianMatrix h;
        h.entries[0][1] = 1.0;
        CHECK_THROWS_AS(numeric_spectrum(h), ValidationError);
    }
    SECTION("sweep budget exhausted") {
        JacobiOptions opt;
        opt.max_sweeps = 0;
        CHECK_THROWS_AS(numeric_spectrum(build_xyz({1, 2, 3}), kGapTol, opt), NumericError);
    }
    SECTION("random Hermitian matrices") {
        std::mt19937_64 gen(42);
        for (int i = 0; i < 1000; ++i) {
            const auto h = oracle::random_hermitian(gen, 2.0);
            const auto s = numeric_spectrum(h, 0.0);
            CHECK(max_residual(h, s) <= 1e-12);
            CHECK(orthonormality_error(s) <= 1e-12);
            CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
            for (double e : s.eigenvalues) CHECK(oracle::char_poly_abs(h.entries, e) <= 1e-9);
            double tr = 0.0;
            for (double e : s.eigenvalues) tr += e;
            CHECK(tr == Approx(h.trace().real()).margin(1e-12));
        }
    }
}

TEST_CASE("analytic and numeric spectra agree for random couplings", "[hamiltonian][property]") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(-2, 2);
    int checked = 0;
    while (checked < 300) {
        const CouplingSet k{u(gen), u(gen), u(gen), u(gen)};
        Spectrum an;
        try {
            an = analytic_spectrum_soc(k, 1e-3);
        } catch (const DegeneracyError&) {
            continue;
        }
        const auto m = match_spectra(an, numeric_spectrum(build_soc(k)));
        CHECK(m.max_eigenvalue_diff <= 1e-10);
        CHECK(m.min_fidelity >= 1 - 1e-10);
        CHECK(std::abs(overlap(an.eigenvectors[2], an.eigenvectors[3])) <= 1e-15);
        ++checked;
    }
}

TEST_CASE("small d: mixed eigenvectors approach Phi+ / Psi-", "[hamiltonian]") {
    // a + c > 0: alpha -> pi/2, e'_3 -> Psi-, e'_4 -> -Phi+
    const auto pos = analytic_spectrum_soc({1.0, 0.2, 0.5, 1e-9});
    CHECK(fidelity(pos.eigenvectors[2], bell::psi_minus()) == Approx(1.0).margin(1e-12));
    CHECK(fidelity(pos.eigenvectors[3], bell::phi_plus()) == Approx(1.0).margin(1e-12));
    // a + c < 0: alpha -> 0
    const auto neg = analytic_spectrum_soc({-1.0, 0.2, -0.5, 1e-9});
    CHECK(fidelity(neg.eigenvectors[2], bell::phi_plus()) == Approx(1.0).margin(1e-12));
    CHECK(fidelity(neg.eigenvectors[3], bell::psi_minus()) == Approx(1.0).margin(1e-12));
}

TEST_CASE("spectral evolution", "[hamiltonian]") {
    const auto spec = analytic_spectrum_soc({1, 0.5, -1, 1});
    const JointState s{{0.5, cplx{0.0, 0.5}, -0.5, 0.5}};

    const auto same = evolve(s, spec, 0.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(same.amps[i] - s.amps[i]) <= 1e-15);

    const auto e = evolve(spec.eigenvectors[2], spec, 1.3);
    CHECK(fidelity(e, spec.eigenvectors[2]) == Approx(1.0).margin(1e-14));
    CHECK(std::abs(overlap(spec.eigenvectors[2], e) - std::polar(1.0, 2.5 * 1.3)) <= 1e-14);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 200; ++i) {
        const double t = u(gen);
        const auto out = evolve(s, spec, t);
        CHECK(out.norm2() == Approx(1.0).margin(1e-12));
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::norm(overlap(spec.eigenvectors[k], out)) ==
                  Approx(std::norm(overlap(spec.eigenvectors[k], s))).margin(1e-12));
        }
        // group property
        const auto twice = evolve(evolve(s, spec, t), spec, -t);
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(twice.amps[k] - s.amps[k]) <= 1e-12);
    }
}
