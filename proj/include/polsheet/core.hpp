#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace polsheet {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Square root on the upper half plane: Im >= 0, and Re >= 0 when the result
/// is real. This is the branch used for every perpendicular momentum in the
/// library, so that evanescent waves decay away from the scatterer.
inline cplx sqrt_upper(cplx z) {
    cplx w = std::sqrt(z);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
    return w;
}

/// Sheet of isotropic charged harmonic oscillators, unrationalized Gaussian
/// units throughout. light_speed defaults to 1 for dimensionless work; all
/// operations read c from here rather than from a global.
struct SheetMaterial {
    double charge;                // e, statC (enters squared everywhere)
    double mass;                  // m, g
    double oscillator_frequency;  // Omega, rad/s
    double areal_density;         // n, 1/cm^2
    double light_speed = 1.0;     // c, cm/s

    SheetMaterial(double e, double m, double omega0, double n, double c = 1.0)
        : charge(e), mass(m), oscillator_frequency(omega0), areal_density(n), light_speed(c) {
        if (!(m > 0.0)) throw std::invalid_argument("SheetMaterial: mass must be positive");
        if (!(n > 0.0)) throw std::invalid_argument("SheetMaterial: areal density must be positive");
        if (!(omega0 >= 0.0)) throw std::invalid_argument("SheetMaterial: oscillator frequency must be >= 0");
        if (!(c > 0.0)) throw std::invalid_argument("SheetMaterial: light speed must be positive");
    }

    /// Sheet with no restoring force whose inverse screening length equals q,
    /// i.e. 2*pi*n*e^2/(m*c^2) = q.
    static SheetMaterial from_q_parameter(double q, double c = 1.0) {
        if (!(q > 0.0)) throw std::invalid_argument("from_q_parameter: q must be positive");
        return SheetMaterial(std::sqrt(q * c * c / (2.0 * pi)), 1.0, 0.0, 1.0, c);
    }
};

/// q = 2*pi*n*e^2/(m*c^2), dimension 1/length.
inline double q_parameter(const SheetMaterial& mat) {
    return 2.0 * pi * mat.areal_density * mat.charge * mat.charge /
           (mat.mass * mat.light_speed * mat.light_speed);
}

/// Frequency and wavenumber parallel to the sheet.
struct Kinematics {
    double omega;       // rad/s
    double k_parallel;  // 1/cm

    Kinematics(double w, double k) : omega(w), k_parallel(k) {
        if (!(w >= 0.0)) throw std::invalid_argument("Kinematics: omega must be >= 0");
        if (!(k >= 0.0)) throw std::invalid_argument("Kinematics: k must be >= 0");
    }
};

enum class Polarization { TE, TM, P };

inline const char* to_string(Polarization pol) {
    switch (pol) {
        case Polarization::TE: return "TE";
        case Polarization::TM: return "TM";
        case Polarization::P: return "P";
    }
    return "?";
}

/// p = sqrt(omega^2/c^2 - k^2) with Im p >= 0. Real and non-negative in the
/// propagating regime k <= omega/c, purely imaginary beyond it.
inline cplx perpendicular_momentum(double omega, double k, double c = 1.0) {
    const double d = (omega / c) * (omega / c) - k * k;
    if (d >= 0.0) return cplx(std::sqrt(d), 0.0);
    return cplx(0.0, std::sqrt(-d));
}

inline cplx perpendicular_momentum(const Kinematics& kin, double c = 1.0) {
    return perpendicular_momentum(kin.omega, kin.k_parallel, c);
}

/// Oscillator polarizability 4*pi*e^2/(m*(Omega^2 - omega^2)), cm^3.
/// Real for real omega != Omega and changes sign at the resonance. Direct
/// evaluation at omega == Omega is refused; the scattering module evaluates
/// every coefficient in a cleared rational form so the resonance stays a
/// regular point there.
inline double polarizability(const SheetMaterial& mat, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("polarizability: omega must be >= 0");
    const double d = mat.oscillator_frequency * mat.oscillator_frequency - omega * omega;
    if (d == 0.0)
        throw std::domain_error("polarizability: resonance/undefined at omega = " + std::to_string(omega));
    return 4.0 * pi * mat.charge * mat.charge / (mat.mass * d);
}

/// eps = 1 - omega_p^2/omega^2 (may be negative).
inline double plasma_permittivity(double omega_p, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("plasma_permittivity: omega must be positive");
    const double x = omega_p / omega;
    return 1.0 - x * x;
}

/// Strength s of the sheet susceptibility eps(z) - 1 = s*delta(z), in cm.
/// Areal-density convention: s = 4*pi*n*alpha(omega).
inline double sheet_susceptibility_strength(const SheetMaterial& mat, double omega) {
    return 4.0 * pi * mat.areal_density * polarizability(mat, omega);
}

} // namespace polsheet
