#pragma once

// Single- and two-qubit pure states in the {|+>, |->} basis, plus the two
// state families the protocols are built from.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "pbrlab/errors.hpp"

namespace pbrlab {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-12;

struct PureState {
    cplx amp_plus{};
    cplx amp_minus{};

    [[nodiscard]] double norm2() const { return std::norm(amp_plus) + std::norm(amp_minus); }
    [[nodiscard]] bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm2() - 1.0) <= tol;
    }

    static PureState plus() { return {1.0, 0.0}; }
    static PureState minus() { return {0.0, 1.0}; }
};

/// Basis order (++, +-, -+, --); the first factor is Alice's qubit.
struct JointState {
    std::array<cplx, 4> amps{};

    [[nodiscard]] double norm2() const {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }
    [[nodiscard]] bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm2() - 1.0) <= tol;
    }
};

inline void require_normalized(const PureState& s, std::string_view name, double tol = kNormTol) {
    if (!s.is_normalized(tol)) {
        throw ValidationError("state '" + std::string(name) + "' is not normalized (norm^2 = " +
                              num(s.norm2()) + ")");
    }
}

inline void require_normalized(const JointState& s, std::string_view name, double tol = kNormTol) {
    if (!s.is_normalized(tol)) {
        throw ValidationError("joint state '" + std::string(name) + "' is not normalized (norm^2 = " +
                              num(s.norm2()) + ")");
    }
}

/// Polar form of <u|v> = cos(theta) e^{i phi}. theta is restricted to the open
/// interval (0, pi/2): identical and orthogonal pairs are rejected.
class OverlapParams {
public:
    static OverlapParams make(double theta, double phi = 0.0) {
        if (!std::isfinite(theta) || !std::isfinite(phi)) {
            throw ValidationError("overlap parameters must be finite");
        }
        if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
            throw DomainError("theta = " + num(theta) +
                              " outside (0, pi/2): pair must be distinct and non-orthogonal");
        }
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double p = std::fmod(phi, two_pi);
        if (p < 0.0) p += two_pi;
        if (p >= two_pi) p = 0.0;
        return OverlapParams(theta, p);
    }

    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double phi() const noexcept { return phi_; }

private:
    OverlapParams(double theta, double phi) : theta_(theta), phi_(phi) {}
    double theta_;
    double phi_;
};

/// <u|v> = conj(u) . v
inline cplx overlap(const PureState& u, const PureState& v, double tol = kNormTol) {
    require_normalized(u, "u", tol);
    require_normalized(v, "v", tol);
    return std::conj(u.amp_plus) * v.amp_plus + std::conj(u.amp_minus) * v.amp_minus;
}

inline cplx overlap(const JointState& x, const JointState& y) {
    cplx s{};
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(x.amps[i]) * y.amps[i];
    return s;
}

/// Phase-insensitive |<x|y>|^2.
inline double fidelity(const PureState& x, const PureState& y) { return std::norm(overlap(x, y)); }
inline double fidelity(const JointState& x, const JointState& y) { return std::norm(overlap(x, y)); }

/// Inverse of the polar form: theta = acos|z|, phi = arg z.
inline OverlapParams params_from_overlap(cplx z) {
    const double mag = std::min(std::abs(z), 1.0);
    return OverlapParams::make(std::acos(mag), std::arg(z));
}

struct XyzPair {
    PureState u;
    PureState v;
    PureState vbar;  // orthogonal to v inside span{u, v}
};

struct SocPair {
    PureState u;
    PureState v;
    PureState w;
};

/// u = e^{-i phi}(cos(t/2)|+> - sin(t/2)|->), v = cos(t/2)|+> + sin(t/2)|->,
/// vbar = -sin(t/2)|+> + cos(t/2)|->.
inline XyzPair build_pair_xyz(const OverlapParams& p) {
    const double c = std::cos(p.theta() / 2);
    const double s = std::sin(p.theta() / 2);
    const cplx phase = std::polar(1.0, -p.phi());
    return XyzPair{
        .u = {phase * c, -phase * s},
        .v = {c, s},
        .vbar = {-s, c},
    };
}

/// u = e^{-i phi}|+>, v = cos t|+> + sin t|->, w = sin t|+> + cos t|->.
inline SocPair build_pair_soc(const OverlapParams& p) {
    const double c = std::cos(p.theta());
    const double s = std::sin(p.theta());
    return SocPair{
        .u = {std::polar(1.0, -p.phi()), 0.0},
        .v = {c, s},
        .w = {s, c},
    };
}

inline JointState tensor(const PureState& a, const PureState& b, double tol = kNormTol) {
    require_normalized(a, "a", tol);
    require_normalized(b, "b", tol);
    return JointState{{a.amp_plus * b.amp_plus, a.amp_plus * b.amp_minus,
                       a.amp_minus * b.amp_plus, a.amp_minus * b.amp_minus}};
}

}  // namespace pbrlab
