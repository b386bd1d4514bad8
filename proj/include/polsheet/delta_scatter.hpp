#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "polsheet/core.hpp"

namespace polsheet {

/// Generalized delta potential mu*(1 + lambda*d_z^2)*delta(z) acting through
/// the value of the field at the origin. lambda = 0 is the plain delta well.
struct DeltaPotential {
    cplx mu;      // 1/cm
    cplx lambda;  // cm^2
};

/// One scattering channel: incoming unit wave from the left, reflected
/// amplitude r, transmitted amplitude t = 1 + r (the field is continuous),
/// phase eta with exp(2i*eta) = 1 + 2r (principal value, Re eta in
/// (-pi/2, pi/2]), and the delta-spike amplitude h of the field ansatz.
struct ScatterResult {
    cplx r;
    cplx t;
    cplx eta;
    cplx h;
};

/// Principal phase from the reflection amplitude, r = i*sin(eta)*exp(i*eta).
/// Undefined (log of zero) exactly where r = -1/2.
inline cplx phase_from_reflection(cplx r) {
    return std::log(1.0 + 2.0 * r) / cplx(0.0, 2.0);
}

namespace detail {
[[noreturn]] inline void throw_pole(const char* what, cplx num, cplx den) {
    std::ostringstream os;
    os << what << ": bound-state pole, numerator (" << num.real() << "," << num.imag()
       << "), denominator (" << den.real() << "," << den.imag() << ")";
    throw std::domain_error(os.str());
}
} // namespace detail

/// Matching across the generalized delta potential at perpendicular momentum
/// p. With mu' = mu*(1 - lambda*p^2):
///   r = -mu'/(mu' - 2ip),  t = -2ip/(mu' - 2ip),  h = mu*lambda*t,
/// where the field value multiplying the potential is taken as the z->0 limit
/// of the regular part, i.e. t.
inline ScatterResult match_delta(const DeltaPotential& pot, cplx p) {
    const cplx mup = pot.mu * (1.0 - pot.lambda * p * p);
    const cplx den = mup - cplx(0.0, 2.0) * p;
    if (den == cplx(0.0, 0.0)) detail::throw_pole("match_delta", -mup, den);
    ScatterResult out;
    out.r = -mup / den;
    out.t = cplx(0.0, -2.0) * p / den;
    out.h = pot.mu * pot.lambda * out.t;
    out.eta = phase_from_reflection(out.r);
    return out;
}

/// Delta-potential parameters of one sheet channel. Uses the direct
/// polarizability, so the resonance omega == Omega is refused here; use
/// reflection() for pole-free evaluation.
inline DeltaPotential delta_params(Polarization pol, const SheetMaterial& mat, double omega, double k) {
    if (!(omega > 0.0)) throw std::invalid_argument("delta_params: omega must be positive");
    const double c = mat.light_speed;
    const double na = mat.areal_density * polarizability(mat, omega);
    switch (pol) {
        case Polarization::TE:
            return {-na * omega * omega / (c * c), 0.0};
        case Polarization::TM:
            return {-na * (omega * omega / (c * c) - k * k), 0.0};
        case Polarization::P:
            return {-na * omega * omega / (c * c), c * c / (omega * omega)};
    }
    throw std::logic_error("delta_params: unknown polarization");
}

/// Sheet reflection/transmission for one channel, evaluated in a cleared
/// rational form: with A = 4*pi*n*e^2/m and D = Omega^2 - omega^2,
///   TE: r = -A w^2 / (A w^2 + 2ip D c^2)
///   TM: r = -A p   / (A p   + 2i  D)
///   P : r = -A k^2 / (A k^2 + 2ip D)
/// No quantity divides by alpha or by p, so the resonance omega = Omega and
/// grazing incidence p = 0 are regular points. At k = 0 the P channel
/// decouples exactly (r = 0).
inline ScatterResult reflection(const SheetMaterial& mat, Polarization pol, double omega, double k) {
    if (!(omega > 0.0)) throw std::invalid_argument("reflection: omega must be positive");
    if (!(k >= 0.0)) throw std::invalid_argument("reflection: k must be >= 0");
    const double c = mat.light_speed;
    const double A = 4.0 * pi * mat.areal_density * mat.charge * mat.charge / mat.mass;
    const double D = mat.oscillator_frequency * mat.oscillator_frequency - omega * omega;
    const cplx p = perpendicular_momentum(omega, k, c);
    const cplx ip = cplx(0.0, 1.0) * p;

    ScatterResult out;
    cplx num, den;
    switch (pol) {
        case Polarization::TE:
            num = -A * omega * omega;
            den = A * omega * omega + 2.0 * ip * D * c * c;
            out.h = 0.0;
            break;
        case Polarization::TM:
            num = -A * p;
            den = A * p + cplx(0.0, 2.0) * D;
            out.h = 0.0;
            break;
        case Polarization::P:
            num = -A * k * k;
            den = A * k * k + 2.0 * ip * D;
            if (k == 0.0) {
                // perpendicular response cannot couple at normal incidence
                if (D == 0.0) detail::throw_pole("reflection[P]", num, den);
                out.r = 0.0;
                out.t = 1.0;
                out.eta = 0.0;
                out.h = -A / D;
                return out;
            }
            out.h = -2.0 * ip * A / den;
            break;
        default:
            throw std::logic_error("reflection: unknown polarization");
    }
    if (den == cplx(0.0, 0.0)) detail::throw_pole("reflection", num, den);
    out.r = num / den;
    out.t = (den + num) / den;
    out.eta = phase_from_reflection(out.r);
    return out;
}

struct HydroReflection {
    cplx te;
    cplx tm;
};

/// Reflection off the zero-stiffness sheet characterized by the single
/// inverse length q:
///   r_TE = -q/(q - ip),  r_TM = -p c^2 q/(p c^2 q - i w^2).
/// Identical to reflection() of a material with Omega = 0 and the same q.
inline HydroReflection hydrodynamic_reflection(double q, double omega, double k, double c = 1.0) {
    if (!(q > 0.0)) throw std::invalid_argument("hydrodynamic_reflection: q must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("hydrodynamic_reflection: omega must be positive");
    const cplx p = perpendicular_momentum(omega, k, c);
    const cplx ip = cplx(0.0, 1.0) * p;
    const cplx den_te = q - ip;
    const cplx den_tm = p * c * c * q - cplx(0.0, 1.0) * omega * omega;
    if (den_te == cplx(0.0, 0.0)) detail::throw_pole("hydrodynamic_reflection[TE]", cplx(-q), den_te);
    if (den_tm == cplx(0.0, 0.0)) detail::throw_pole("hydrodynamic_reflection[TM]", -p * c * c * q, den_tm);
    return {-q / den_te, -p * c * c * q / den_tm};
}

/// Scattering phase of one channel; the principal value of the phase carried
/// by reflection(). Multi-valued mod pi by nature, not resolved here.
inline cplx phase_shift(const SheetMaterial& mat, Polarization pol, double omega, double k) {
    return reflection(mat, pol, omega, k).eta;
}

} // namespace polsheet
