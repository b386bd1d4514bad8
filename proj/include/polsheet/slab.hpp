#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "polsheet/core.hpp"
#include "polsheet/delta_scatter.hpp"

namespace polsheet {

/// Homogeneous layer of thickness L between vacuum half spaces.
struct SlabConfig {
    double thickness;    // L, cm, > 0
    cplx permittivity;   // eps(omega), may be negative or complex
    double omega;        // rad/s
    double k_parallel;   // 1/cm
    double light_speed = 1.0;
};

/// Momentum perpendicular to the faces inside the layer,
/// q = sqrt(eps*w^2/c^2 - k^2) on the Im >= 0 branch. Below the plasma edge
/// (eps < 0) this makes exp(2iqL) decay, keeping thick slabs stable.
inline cplx interior_momentum(const SlabConfig& cfg) {
    const double c = cfg.light_speed;
    return sqrt_upper(cfg.permittivity * cfg.omega * cfg.omega / (c * c) -
                      cfg.k_parallel * cfg.k_parallel);
}

struct SlabReflection {
    cplx te;
    cplx tm;
};

/// Two-interface reflection of the layer,
///   r = rho*(e^{2iqL} - 1)/(1 - rho^2 e^{2iqL}),
/// with rho_TE = (q-p)/(q+p) and rho_TM = (eps*p-q)/(eps*p+q). The TM
/// interface coefficient is in the convention for which the thin-film limit
/// of a plasma layer reproduces the sheet coefficients.
inline SlabReflection slab_reflection(const SlabConfig& cfg) {
    if (!(cfg.thickness > 0.0)) throw std::invalid_argument("slab_reflection: L must be positive");
    if (!(cfg.omega > 0.0)) throw std::invalid_argument("slab_reflection: omega must be positive");
    const cplx p = perpendicular_momentum(cfg.omega, cfg.k_parallel, cfg.light_speed);
    const cplx q = interior_momentum(cfg);
    const cplx eps = cfg.permittivity;

    if (q + p == cplx(0.0, 0.0) || q + eps * p == cplx(0.0, 0.0)) {
        std::ostringstream os;
        os << "slab_reflection: degenerate interface, q = (" << q.real() << "," << q.imag()
           << "), p = (" << p.real() << "," << p.imag() << ")";
        throw std::domain_error(os.str());
    }
    const cplx rho_te = (q - p) / (q + p);
    const cplx rho_tm = (eps * p - q) / (eps * p + q);
    const cplx phase = std::exp(cplx(0.0, 2.0) * q * cfg.thickness);

    auto two_face = [&](cplx rho, const char* tag) {
        const cplx den = 1.0 - rho * rho * phase;
        if (den == cplx(0.0, 0.0)) {
            std::ostringstream os;
            os << "slab_reflection[" << tag << "]: resonator pole at L = " << cfg.thickness
               << ", q = (" << q.real() << "," << q.imag() << ")";
            throw std::domain_error(os.str());
        }
        return rho * (phase - 1.0) / den;
    };
    return {two_face(rho_te, "TE"), two_face(rho_tm, "TM")};
}

/// Permittivity of a layer of thickness L carrying the areal density of the
/// sheet at fixed q: eps = 1 - 2*q*c^2/(w^2*L). Grows like 1/L as L -> 0.
inline double thin_film_map(double q, double thickness, double omega, double c = 1.0) {
    if (!(thickness > 0.0)) throw std::invalid_argument("thin_film_map: L must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("thin_film_map: omega must be positive");
    return 1.0 - 2.0 * q * c * c / (omega * omega * thickness);
}

inline double thin_film_map(const SheetMaterial& mat, double thickness, double omega) {
    return thin_film_map(q_parameter(mat), thickness, omega, mat.light_speed);
}

struct SlabLimitPoint {
    double thickness;
    double residual_te;  // |r_TE^(L) - r_TE(sheet)|
    double residual_tm;
};

struct SlabLimitReport {
    std::vector<SlabLimitPoint> points;  // in descending L order
    double slope_te;                     // log-log least-squares exponents
    double slope_tm;
    cplx sheet_te;
    cplx sheet_tm;

    double smallest_residual_te() const { return points.back().residual_te; }
    double smallest_residual_tm() const { return points.back().residual_tm; }
};

namespace detail {
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
} // namespace detail

/// Thin-film convergence study against the zero-stiffness sheet with
/// parameter q. The grid must be strictly descending, at least 3 points, and
/// the kinematics propagating (real p > 0). Residuals are evaluated per L and
/// the convergence exponents fitted by least squares on log-log data.
inline SlabLimitReport slab_limit_study(double q, double omega, double k,
                                        const std::vector<double>& thickness_grid,
                                        double c = 1.0) {
    if (thickness_grid.size() < 3)
        throw std::domain_error("slab_limit_study: insufficient data, need at least 3 thicknesses");
    for (std::size_t i = 0; i < thickness_grid.size(); ++i) {
        if (!(thickness_grid[i] > 0.0))
            throw std::invalid_argument("slab_limit_study: thicknesses must be positive");
        if (i > 0 && !(thickness_grid[i] < thickness_grid[i - 1]))
            throw std::invalid_argument("slab_limit_study: grid must be strictly descending");
    }
    const cplx p = perpendicular_momentum(omega, k, c);
    if (!(p.real() > 0.0) || p.imag() != 0.0)
        throw std::domain_error("slab_limit_study: propagating regime required (k < omega/c)");

    const HydroReflection sheet = hydrodynamic_reflection(q, omega, k, c);
    SlabLimitReport report;
    report.sheet_te = sheet.te;
    report.sheet_tm = sheet.tm;
    std::vector<double> ls, res_te, res_tm;
    for (double L : thickness_grid) {
        SlabConfig cfg{L, thin_film_map(q, L, omega, c), omega, k, c};
        const SlabReflection r = slab_reflection(cfg);
        const double dte = std::abs(r.te - sheet.te);
        const double dtm = std::abs(r.tm - sheet.tm);
        report.points.push_back({L, dte, dtm});
        ls.push_back(L);
        res_te.push_back(dte);
        res_tm.push_back(dtm);
    }
    report.slope_te = detail::loglog_slope(ls, res_te);
    report.slope_tm = detail::loglog_slope(ls, res_tm);
    return report;
}

/// Overload taking the sheet material; requires Omega = 0 (the study targets
/// the zero-stiffness sheet).
inline SlabLimitReport slab_limit_study(const SheetMaterial& mat, double omega, double k,
                                        const std::vector<double>& thickness_grid) {
    if (mat.oscillator_frequency != 0.0)
        throw std::invalid_argument("slab_limit_study: sheet target requires Omega = 0");
    return slab_limit_study(q_parameter(mat), omega, k, thickness_grid, mat.light_speed);
}

} // namespace polsheet
