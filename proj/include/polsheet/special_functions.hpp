#pragma once

#include <cmath>
#include <stdexcept>

namespace polsheet {

/// Sum of the alternating series sum_{j>=0} (-1)^j a(j) by the
/// Cohen-Rodriguez Villegas-Zagier Chebyshev acceleration. For terms that are
/// moments of a positive measure (all uses here) the error shrinks like
/// (3+sqrt(8))^-n, so the default depth saturates double precision.
template <class Term>
double alternating_series_sum(Term a, int n = 28) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = (d + 1.0 / d) / 2.0;
    double b = -1.0;
    double c = -d;
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        c = b - c;
        s += c * a(j);
        b = (j + n) * (j - n) * b / ((j + 0.5) * (j + 1.0));
    }
    return s / d;
}

/// zeta(s) for s > 0, s != 1, through the alternating (eta) series:
/// zeta(s) = eta(s)/(1 - 2^{1-s}).
inline double riemann_zeta(double s) {
    if (!(s > 0.0)) throw std::domain_error("riemann_zeta: need s > 0");
    if (s == 1.0) throw std::domain_error("riemann_zeta: pole at s = 1");
    const double eta = alternating_series_sum([s](int j) { return std::pow(j + 1.0, -s); });
    return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

/// Dirichlet beta(s) = sum_{j>=0} (-1)^j (2j+1)^-s for s > 0.
inline double dirichlet_beta(double s) {
    if (!(s > 0.0)) throw std::domain_error("dirichlet_beta: need s > 0");
    return alternating_series_sum([s](int j) { return std::pow(2.0 * j + 1.0, -s); });
}

} // namespace polsheet
