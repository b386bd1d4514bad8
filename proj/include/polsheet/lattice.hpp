#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "polsheet/core.hpp"
#include "polsheet/special_functions.hpp"

namespace polsheet {

using Vec3 = std::array<double, 3>;

struct Mat3 {
    std::array<double, 9> a{};
    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
    double trace() const { return a[0] + a[4] + a[8]; }
};

struct Mat3c {
    std::array<cplx, 9> a{};
    cplx& operator()(int i, int j) { return a[3 * i + j]; }
    cplx operator()(int i, int j) const { return a[3 * i + j]; }
    cplx trace() const { return a[0] + a[4] + a[8]; }
};

namespace detail {

/// Compensated (Kahan) accumulator; keeps lattice sums reproducible
/// bit-for-bit at fixed cutoff and iteration order.
class KahanAccumulator {
  public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double simpson_cos_power(double exponent) {
    // int_0^{pi/4} cos(t)^exponent dt, composite Simpson on 128 intervals
    constexpr int n = 128;
    const double h = (pi / 4.0) / n;
    double s = 1.0 + std::pow(std::cos(pi / 4.0), exponent);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * std::pow(std::cos(i * h), exponent);
    return s * h / 3.0;
}

inline double inverse_power(double r2, double s) {
    if (s == 3.0) return 1.0 / (r2 * std::sqrt(r2));
    if (s == 5.0) return 1.0 / (r2 * r2 * std::sqrt(r2));
    if (s == 4.0) return 1.0 / (r2 * r2);
    return std::pow(r2, -0.5 * s);
}

} // namespace detail

/// Radiating dipole coupling tensor T(x) = (grad o grad + (w/c)^2) e^{i w x / c}/x
/// in closed form (analytic second derivatives). At omega = 0 this is the
/// static dipole tensor (3 x o x - x^2)/x^5, which is traceless.
inline Mat3c dipole_kernel(double omega, const Vec3& x, double c = 1.0) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r2 == 0.0) throw std::domain_error("dipole_kernel: singular at x = 0 (self term)");
    const double r = std::sqrt(r2);
    const double kap = omega / c;
    const cplx e = std::exp(cplx(0.0, kap * r));
    const cplx f = e / r;
    const cplx f1 = e * (cplx(0.0, kap * r) - 1.0) / r2;                       // f'
    const cplx f2 = e * (2.0 - cplx(0.0, 2.0 * kap * r) - kap * kap * r2) / (r2 * r);  // f''
    const cplx radial = f2 - f1 / r;     // coefficient of x_i x_j / r^2
    const cplx diag = f1 / r + kap * kap * f;
    Mat3c t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = radial * x[i] * x[j] / r2 + (i == j ? diag : 0.0);
    return t;
}

struct Dipole {
    Vec3 site;
    Vec3 moment;
};

/// Field of a finite set of dipoles, E(x) = 4*pi sum_n T(x - s_n) p_n.
inline std::array<cplx, 3> field_of_dipoles(const std::vector<Dipole>& dipoles, double omega,
                                            const Vec3& x, double c = 1.0) {
    std::array<cplx, 3> field{cplx(0.0), cplx(0.0), cplx(0.0)};
    for (const Dipole& d : dipoles) {
        const Vec3 dx{x[0] - d.site[0], x[1] - d.site[1], x[2] - d.site[2]};
        if (dx[0] == 0.0 && dx[1] == 0.0 && dx[2] == 0.0)
            throw std::domain_error("field_of_dipoles: evaluation point coincides with a site");
        const Mat3c t = dipole_kernel(omega, dx, c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) field[i] += 4.0 * pi * t(i, j) * d.moment[j];
    }
    return field;
}

/// Square-lattice zeta Z_2(s) = sum'_{n in Z^2} |n|^-s in closed form,
/// 4*zeta(s/2)*beta(s/2). Divergent for s <= 2.
inline double epstein_zeta(double s) {
    if (!(s > 2.0)) throw std::domain_error("epstein_zeta: divergent for s <= 2");
    return 4.0 * riemann_zeta(s / 2.0) * dirichlet_beta(s / 2.0);
}

/// Wavevector in units of the inverse lattice spacing; the phase of a lattice
/// sum term at integer site n is kx*n1 + ky*n2.
struct LatticeWavevector {
    double kx = 0.0;
    double ky = 0.0;
    bool is_zero() const { return kx == 0.0 && ky == 0.0; }
};

struct LatticeSumResult {
    double value;         // raw partial sum over the square cutoff
    int cutoff;           // N: |n1|,|n2| <= N
    double tail_estimate; // exterior mid-cell integral; an upper bound on the
                          // omitted tail, and its value at k = 0
};

/// Exterior-of-square integral of |x|^-s outside the half-integer boundary
/// N + 1/2: (8/(s-2)) * Nh^{2-s} * int_0^{pi/4} cos^{s-2}. At k = 0 this is
/// the tail correction of the raw sum (mid-cell rule); at k != 0 oscillation
/// only shrinks the true tail, so it remains a bound.
inline double lattice_sum_tail(double s, int cutoff) {
    if (!(s > 2.0)) throw std::domain_error("lattice_sum_tail: divergent for s <= 2");
    const double nh = cutoff + 0.5;
    return 8.0 / (s - 2.0) * detail::simpson_cos_power(s - 2.0) * std::pow(nh, 2.0 - s);
}

/// Partial lattice sum sum'_{|n1|,|n2|<=N} e^{-i k.n} / |n|^s. The sum is
/// real on the square lattice (inversion symmetry pairs the phases into
/// cosines), absolutely convergent for s > 2. Fixed iteration order plus
/// compensated summation make the result reproducible bit-for-bit.
inline LatticeSumResult lattice_sum(double s, LatticeWavevector k, int cutoff) {
    if (!(s > 2.0)) throw std::domain_error("lattice_sum: divergent for s <= 2");
    if (cutoff < 1) throw std::invalid_argument("lattice_sum: cutoff must be >= 1");
    detail::KahanAccumulator acc;
    const bool zero_k = k.is_zero();
    for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
        const double d1 = n1;
        for (int n2 = -cutoff; n2 <= cutoff; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const double d2 = n2;
            const double r2 = d1 * d1 + d2 * d2;
            const double w = detail::inverse_power(r2, s);
            acc.add(zero_k ? w : std::cos(k.kx * d1 + k.ky * d2) * w);
        }
    }
    return {acc.value(), cutoff, lattice_sum_tail(s, cutoff)};
}

/// Closed form checked against the raw sum: raw value plus the tail
/// correction at k = 0.
inline double epstein_zeta_direct(double s, int cutoff) {
    return lattice_sum(s, {0.0, 0.0}, cutoff).value + lattice_sum_tail(s, cutoff);
}

/// Small-wavevector expansion of the lattice sum,
///   C(s) k^{s-2} + Z_2(s) - (k^2/4) Z_2(s-2),
/// with C(s) = 2^{2-s} pi Gamma((2-s)/2)/Gamma(s/2), the continuum 2-D
/// Fourier transform of the inverse-power kernel. The k^2 term is included
/// only for s > 4, where Z_2(s-2) converges. Even integer s hits a Gamma
/// pole and is refused.
inline double lattice_sum_small_k(double s, double k) {
    if (!(s > 2.0)) throw std::domain_error("lattice_sum_small_k: divergent for s <= 2");
    if (!(k >= 0.0)) throw std::invalid_argument("lattice_sum_small_k: k must be >= 0");
    if (std::fmod(s, 2.0) == 0.0)
        throw std::domain_error("lattice_sum_small_k: expansion invalid at even s = " + std::to_string(s));
    const double coeff = std::pow(2.0, 2.0 - s) * pi * std::tgamma((2.0 - s) / 2.0) / std::tgamma(s / 2.0);
    double value = coeff * std::pow(k, s - 2.0) + epstein_zeta(s);
    if (s > 4.0) value -= k * k / 4.0 * epstein_zeta(s - 2.0);
    return value;
}

/// Static dipole coupling matrix of the square lattice at wavevector k:
/// in-plane block sum' (3 n o n - n^2)/n^5 e^{-ik.n}, out-of-plane entry
/// -sum' e^{-ik.n}/n^3, mixed entries exactly zero (the kernel has no
/// in-plane/out-of-plane mixing at z = 0). Traceless term by term. At k = 0
/// the exterior tail correction is applied entry-wise (it is traceless too);
/// at k != 0 the raw sums are returned and tail_estimate bounds the omission.
struct InteractionMatrix {
    Mat3 matrix;
    int cutoff;
    double tail_estimate;
};

inline InteractionMatrix static_interaction_matrix(LatticeWavevector k, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("static_interaction_matrix: cutoff must be >= 1");
    detail::KahanAccumulator t11, t12, t22, t33;
    const bool zero_k = k.is_zero();
    for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
        const double d1 = n1;
        for (int n2 = -cutoff; n2 <= cutoff; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const double d2 = n2;
            const double r2 = d1 * d1 + d2 * d2;
            const double w3 = 1.0 / (r2 * std::sqrt(r2));
            const double w5 = w3 / r2;
            const double phase = zero_k ? 1.0 : std::cos(k.kx * d1 + k.ky * d2);
            t11.add(phase * (3.0 * d1 * d1 - r2) * w5);
            t12.add(phase * 3.0 * d1 * d2 * w5);
            t22.add(phase * (3.0 * d2 * d2 - r2) * w5);
            t33.add(phase * w3);
        }
    }
    const double tail3 = lattice_sum_tail(3.0, cutoff);
    InteractionMatrix out{{}, cutoff, tail3};
    double c11 = t11.value(), c12 = t12.value(), c22 = t22.value(), c33 = -t33.value();
    if (zero_k) {
        // exterior angular integrals of the kernel: half the n^-3 tail per
        // in-plane diagonal, minus the full tail out of plane; trace-free
        c11 += 0.5 * tail3;
        c22 += 0.5 * tail3;
        c33 -= tail3;
    }
    out.matrix(0, 0) = c11;
    out.matrix(0, 1) = out.matrix(1, 0) = c12;
    out.matrix(1, 1) = c22;
    out.matrix(2, 2) = c33;
    return out;
}

/// Coupling with the divergent on-site term absorbed: alpha/(1 - alpha*T_self).
inline cplx renormalized_coupling(cplx alpha, cplx self_term) {
    const cplx den = 1.0 - alpha * self_term;
    if (den == cplx(0.0, 0.0))
        throw std::domain_error("renormalized_coupling: pole, 1 - alpha*self_term = 0");
    return alpha / den;
}

/// One eigenmode frequency of the dipole lattice. omega_squared < 0 marks an
/// instability; it is reported, not hidden.
struct DispersionRoot {
    double omega_squared;
    bool stable;

    double frequency() const {
        if (!stable) throw std::domain_error("DispersionRoot: unstable mode, omega^2 < 0");
        return std::sqrt(omega_squared);
    }
};

inline DispersionRoot make_root(double omega_squared) {
    return {omega_squared, omega_squared >= 0.0};
}

enum class DispersionChannel { Parallel, Perpendicular };

/// Leading k-independent eigenfrequencies of the dipole lattice with spacing
/// a: omega_par^2 = Omega^2 - 2 pi e^2 n Z_2(3)/(m a) (two-fold) and
/// omega_perp^2 = Omega^2 + 4 pi e^2 n Z_2(3)/(m a).
inline DispersionRoot dispersion_leading(const SheetMaterial& mat, double spacing,
                                         DispersionChannel channel) {
    if (!(spacing > 0.0)) throw std::invalid_argument("dispersion_leading: spacing must be positive");
    const double z23 = epstein_zeta(3.0);
    const double shift = 2.0 * pi * mat.charge * mat.charge * mat.areal_density * z23 /
                         (mat.mass * spacing);
    const double om2 = mat.oscillator_frequency * mat.oscillator_frequency;
    switch (channel) {
        case DispersionChannel::Parallel: return make_root(om2 - shift);
        case DispersionChannel::Perpendicular: return make_root(om2 + 2.0 * shift);
    }
    throw std::logic_error("dispersion_leading: unknown channel");
}

/// Eigenvalues and mode frequencies from the static coupling matrix at
/// dimensionless wavevector k (units 1/a): for each eigenvalue tau of
/// T(k), omega^2 = Omega^2 - 4 pi e^2 tau/(m a^3). Roots are ordered
/// in-plane (ascending tau) then out-of-plane.
struct StaticDispersion {
    std::array<double, 3> tau;
    std::array<DispersionRoot, 3> roots;
};

inline StaticDispersion dispersion_static(const SheetMaterial& mat, double spacing,
                                          LatticeWavevector k, int cutoff = 2000) {
    if (!(spacing > 0.0)) throw std::invalid_argument("dispersion_static: spacing must be positive");
    const InteractionMatrix t = static_interaction_matrix(k, cutoff);
    const double avg = 0.5 * (t.matrix(0, 0) + t.matrix(1, 1));
    const double dif = 0.5 * (t.matrix(0, 0) - t.matrix(1, 1));
    const double disc = std::sqrt(dif * dif + t.matrix(0, 1) * t.matrix(0, 1));
    StaticDispersion out;
    out.tau = {avg - disc, avg + disc, t.matrix(2, 2)};
    const double om2 = mat.oscillator_frequency * mat.oscillator_frequency;
    const double pre = 4.0 * pi * mat.charge * mat.charge /
                       (mat.mass * spacing * spacing * spacing);
    for (int i = 0; i < 3; ++i) out.roots[i] = make_root(om2 - pre * out.tau[i]);
    return out;
}

} // namespace polsheet
