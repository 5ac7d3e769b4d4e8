#pragma once

// Two-spin interaction Hamiltonians as explicit 4x4 matrices, their
// closed-form spectra, a cyclic Jacobi eigensolver used as an independent
// check, and unitary evolution through the spectral decomposition.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "pbrlab/errors.hpp"
#include "pbrlab/qstate.hpp"

namespace pbrlab {

using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Mat4 = std::array<std::array<cplx, 4>, 4>;

inline constexpr double kGapTol = 1e-9;
inline constexpr double kResidualTol = 1e-12;

enum class Variant { Xyz, Soc };

inline const char* variant_name(Variant v) { return v == Variant::Xyz ? "xyz" : "soc"; }

/// Coupling strengths of a*XX + b*YY + c*ZZ + d*(XZ - ZX). The XYZ
/// Hamiltonian is the d = 0 member of the family.
struct CouplingSet {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    [[nodiscard]] CouplingSet scaled(double k) const { return {k * a, k * b, k * c, k * d}; }
};

struct HamiltonianMatrix {
    Mat4 entries{};

    [[nodiscard]] const cplx& operator()(std::size_t r, std::size_t c) const { return entries[r][c]; }
    [[nodiscard]] cplx& operator()(std::size_t r, std::size_t c) { return entries[r][c]; }

    [[nodiscard]] bool is_hermitian(double tol = 0.0) const {
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                if (std::abs(entries[r][c] - std::conj(entries[c][r])) > tol) return false;
        return true;
    }
    [[nodiscard]] cplx trace() const {
        return entries[0][0] + entries[1][1] + entries[2][2] + entries[3][3];
    }
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto& row : entries)
            for (const auto& x : row) m = std::max(m, std::abs(x));
        return m;
    }
};

/// Four eigenpairs in label order. For analytic spectra label k is the
/// protocol outcome e_k (or e'_k); numeric spectra are labelled 1..4 in
/// ascending eigenvalue order.
struct Spectrum {
    std::array<double, 4> eigenvalues{};
    std::array<JointState, 4> eigenvectors{};
    std::array<int, 4> labels{1, 2, 3, 4};
    std::optional<double> alpha;
    bool primed = false;

    [[nodiscard]] std::string label_name(std::size_t i) const {
        return std::string(primed ? "e'_" : "e_") + std::to_string(labels[i]);
    }
};

namespace pauli {

inline Mat2 id() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
inline Mat2 x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
inline Mat2 y() { return {{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}}; }
inline Mat2 z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }

/// A (x) B with A acting on Alice's (first) qubit.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
    return out;
}

}  // namespace pauli

namespace detail {

inline void axpy(Mat4& acc, double s, const Mat4& m) {
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) acc[r][c] += s * m[r][c];
}

inline Mat4 matmul(const Mat4& x, const Mat4& y) {
    Mat4 out{};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t k = 0; k < 4; ++k) {
            if (x[r][k] == cplx{}) continue;
            for (std::size_t c = 0; c < 4; ++c) out[r][c] += x[r][k] * y[k][c];
        }
    return out;
}

inline Mat4 adjoint(const Mat4& m) {
    Mat4 out{};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out[r][c] = std::conj(m[c][r]);
    return out;
}

inline Mat4 identity4() {
    Mat4 out{};
    for (std::size_t i = 0; i < 4; ++i) out[i][i] = 1.0;
    return out;
}

inline JointState apply(const Mat4& m, const JointState& s) {
    JointState out{};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out.amps[r] += m[r][c] * s.amps[c];
    return out;
}

inline void check_gaps(const std::array<double, 4>& ev, double gap_tol, bool primed) {
    if (gap_tol <= 0.0) return;
    const char* sym = primed ? "E'_" : "E_";
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(ev[i] - ev[j]) < gap_tol) {
                throw DegeneracyError("degenerate spectrum: " + std::string(sym) + std::to_string(i + 1) +
                                      " = " + num(ev[i]) + " and " + sym + std::to_string(j + 1) +
                                      " = " + num(ev[j]) + " differ by less than " + num(gap_tol));
            }
}

}  // namespace detail

namespace bell {

inline JointState phi_plus() { return {{M_SQRT1_2, 0.0, 0.0, M_SQRT1_2}}; }
inline JointState phi_minus() { return {{M_SQRT1_2, 0.0, 0.0, -M_SQRT1_2}}; }
inline JointState psi_plus() { return {{0.0, M_SQRT1_2, M_SQRT1_2, 0.0}}; }
inline JointState psi_minus() { return {{0.0, M_SQRT1_2, -M_SQRT1_2, 0.0}}; }

}  // namespace bell

inline HamiltonianMatrix build_soc(const CouplingSet& k) {
    using namespace pauli;
    HamiltonianMatrix h;
    detail::axpy(h.entries, k.a, kron(x(), x()));
    detail::axpy(h.entries, k.b, kron(y(), y()));
    detail::axpy(h.entries, k.c, kron(z(), z()));
    detail::axpy(h.entries, k.d, kron(x(), z()));
    detail::axpy(h.entries, -k.d, kron(z(), x()));
    return h;
}

/// a XX + b YY + c ZZ. A nonzero d is rejected; use build_soc for that.
inline HamiltonianMatrix build_xyz(const CouplingSet& k) {
    if (k.d != 0.0) throw ValidationError("build_xyz: d must be zero for the XYZ Hamiltonian");
    return build_soc(k);
}

/// Bell-state spectrum of the XYZ Hamiltonian in outcome order
/// e_1 = Phi+, e_2 = Phi-, e_3 = Psi+, e_4 = Psi-.
inline Spectrum analytic_spectrum_xyz(const CouplingSet& k, double gap_tol = kGapTol) {
    if (k.d != 0.0) throw ValidationError("analytic_spectrum_xyz: d must be zero");
    if (k.a == k.b || k.a == -k.b) {
        throw DegeneracyError("degenerate spectrum: a = " + num(k.a) + ", b = " + num(k.b) + " violates a != +-b");
    }
    Spectrum s;
    s.eigenvalues = {k.a - k.b + k.c, -k.a + k.b + k.c, k.a + k.b - k.c, -(k.a + k.b + k.c)};
    s.eigenvectors = {bell::phi_plus(), bell::phi_minus(), bell::psi_plus(), bell::psi_minus()};
    detail::check_gaps(s.eigenvalues, gap_tol, false);
    return s;
}

/// Mixing angle of the Phi+/Psi- block:
/// tan(alpha) = (a + c + sqrt((a+c)^2 + 4d^2)) / (2d), principal branch.
inline double mixing_angle(double a_plus_c, double d) {
    if (d == 0.0 || !std::isfinite(d)) throw DomainError("mixing angle undefined for d = 0");
    const double r = std::hypot(a_plus_c, 2.0 * d);
    // s + r loses all digits for large negative s; 4d^2 / (r - s) is the same quantity
    const double num = a_plus_c >= 0.0 ? a_plus_c + r : 4.0 * d * d / (r - a_plus_c);
    return std::atan(num / (2.0 * d));
}

/// Spectrum of the spin-orbit Hamiltonian: e'_1 = Phi-, e'_2 = Psi+, and
/// e'_3, e'_4 the alpha-rotations of {Phi+, Psi-}.
inline Spectrum analytic_spectrum_soc(const CouplingSet& k, double gap_tol = kGapTol) {
    if (k.d == 0.0) throw DomainError("analytic_spectrum_soc: d = 0 leaves the mixing angle undefined");
    if (k.a == k.c) {
        throw DegeneracyError("degenerate spectrum: a = c = " + num(k.a) +
                              " gives E'_1 = E'_2");
    }
    const double s = k.a + k.c;
    const double r = std::hypot(s, 2.0 * k.d);
    const double alpha = mixing_angle(s, k.d);
    const double ca = std::cos(alpha);
    const double sa = std::sin(alpha);

    Spectrum out;
    out.primed = true;
    out.alpha = alpha;
    out.eigenvalues = {-k.a + k.b + k.c, k.a + k.b - k.c, -k.b - r, -k.b + r};
    const double h = M_SQRT1_2;
    out.eigenvectors = {
        bell::phi_minus(),
        bell::psi_plus(),
        JointState{{h * ca, h * sa, -h * sa, h * ca}},
        JointState{{-h * sa, h * ca, -h * ca, -h * sa}},
    };
    detail::check_gaps(out.eigenvalues, gap_tol, true);
    return out;
}

inline Spectrum analytic_spectrum(Variant v, const CouplingSet& k, double gap_tol = kGapTol) {
    return v == Variant::Xyz ? analytic_spectrum_xyz(k, gap_tol) : analytic_spectrum_soc(k, gap_tol);
}

inline HamiltonianMatrix build(Variant v, const CouplingSet& k) {
    return v == Variant::Xyz ? build_xyz(k) : build_soc(k);
}

struct JacobiOptions {
    double off_tol = 1e-14;
    int max_sweeps = 60;
    double hermitian_tol = 1e-12;
};

/// Cyclic complex Jacobi diagonalization. Eigenvalues come back ascending;
/// each eigenvector is phase-fixed so its largest component is real positive.
inline Spectrum numeric_spectrum(const HamiltonianMatrix& m, double gap_tol = kGapTol,
                                 const JacobiOptions& opt = {}) {
    const double scale = std::max(1.0, m.max_abs());
    if (!m.is_hermitian(opt.hermitian_tol * scale)) {
        throw ValidationError("numeric_spectrum: input matrix is not Hermitian");
    }
    Mat4 a = m.entries;
    for (std::size_t i = 0; i < 4; ++i) {
        a[i][i] = a[i][i].real();
        for (std::size_t j = i + 1; j < 4; ++j) a[j][i] = std::conj(a[i][j]);
    }
    Mat4 v = detail::identity4();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                if (r != c) s += std::norm(a[r][c]);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > opt.off_tol * scale) {
        if (++sweep > opt.max_sweeps) {
            throw NumericError("numeric_spectrum: Jacobi iteration did not converge in " +
                               std::to_string(opt.max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                const double mag = std::abs(a[p][q]);
                if (mag == 0.0) continue;
                const cplx ph = a[p][q] / mag;  // e^{i beta}
                const double app = a[p][p].real();
                const double aqq = a[q][q].real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J = diag(1, e^{-i beta}) on (p, q) followed by a real rotation
                Mat4 j = detail::identity4();
                j[p][p] = c;
                j[p][q] = s;
                j[q][p] = -s * std::conj(ph);
                j[q][q] = c * std::conj(ph);

                a = detail::matmul(detail::adjoint(j), detail::matmul(a, j));
                a[p][q] = a[q][p] = 0.0;
                a[p][p] = app - t * mag;
                a[q][q] = aqq + t * mag;
                v = detail::matmul(v, j);
            }
        }
    }

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x][x].real() < a[y][y].real(); });

    Spectrum out;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t col = order[k];
        out.eigenvalues[k] = a[col][col].real();
        JointState e;
        std::size_t big = 0;
        for (std::size_t r = 0; r < 4; ++r) {
            e.amps[r] = v[r][col];
            if (std::abs(e.amps[r]) > std::abs(e.amps[big]) + 1e-15) big = r;
        }
        const cplx fix = std::conj(e.amps[big]) / std::abs(e.amps[big]);
        for (auto& x : e.amps) x *= fix;
        out.eigenvectors[k] = e;
    }
    detail::check_gaps(out.eigenvalues, gap_tol, false);
    return out;
}

/// Largest |(H v - lambda v)_i| over all eigenpairs and entries.
inline double max_residual(const HamiltonianMatrix& h, const Spectrum& s) {
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const JointState hv = detail::apply(h.entries, s.eigenvectors[k]);
        for (std::size_t i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(hv.amps[i] - s.eigenvalues[k] * s.eigenvectors[k].amps[i]));
    }
    return worst;
}

/// Largest |<e_i|e_j> - delta_ij|.
inline double orthonormality_error(const Spectrum& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx g = overlap(s.eigenvectors[i], s.eigenvectors[j]);
            worst = std::max(worst, std::abs(g - (i == j ? cplx{1.0} : cplx{})));
        }
    return worst;
}

struct SpectrumMatch {
    std::array<std::size_t, 4> index{};  // numeric index paired with each reference index
    double max_eigenvalue_diff = 0.0;
    double min_fidelity = 1.0;
};

/// Pairs each eigenvector of `reference` with the eigenvector of `other` of
/// highest fidelity. Pairing is by state, never by position.
inline SpectrumMatch match_spectra(const Spectrum& reference, const Spectrum& other) {
    SpectrumMatch m;
    std::array<bool, 4> used{};
    for (std::size_t i = 0; i < 4; ++i) {
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            if (used[j]) continue;
            const double f = fidelity(reference.eigenvectors[i], other.eigenvectors[j]);
            if (f > best) {
                best = f;
                arg = j;
            }
        }
        used[arg] = true;
        m.index[i] = arg;
        m.min_fidelity = std::min(m.min_fidelity, best);
        m.max_eigenvalue_diff =
            std::max(m.max_eigenvalue_diff, std::abs(reference.eigenvalues[i] - other.eigenvalues[arg]));
    }
    return m;
}

/// exp(-iHt)|s> assembled from the eigenpairs of H.
inline JointState evolve(const JointState& s, const Spectrum& spec, double t) {
    JointState out{};
    for (std::size_t k = 0; k < 4; ++k) {
        const cplx amp = std::polar(1.0, -spec.eigenvalues[k] * t) * overlap(spec.eigenvectors[k], s);
        for (std::size_t i = 0; i < 4; ++i) out.amps[i] += amp * spec.eigenvectors[k].amps[i];
    }
    return out;
}

}  // namespace pbrlab
