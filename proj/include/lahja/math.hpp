#pragma once

#include <cmath>
#include <limits>

#include "lahja/errors.hpp"

namespace lahja::math {

// Regularized incomplete gamma functions, series + continued-fraction forms.
// P(a,x) + Q(a,x) = 1; the chi-square survival function with k degrees of
// freedom at x is Q(k/2, x/2).

namespace detail {

inline constexpr int kMaxIter = 500;
inline constexpr double kEps = 1e-16;

// Lower regularized gamma by power series, valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz's continued fraction, valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Q(a, x) = upper regularized incomplete gamma.
inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw DomainError("gamma_q: a must be positive");
    if (x < 0.0) throw DomainError("gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

inline double gamma_p(double a, double x) { return 1.0 - gamma_q(a, x); }

/// P(X > x) for a chi-square variable with `dof` degrees of freedom.
inline double chi2_sf(double x, std::size_t dof) {
    if (dof == 0) throw DomainError("chi2_sf: dof must be >= 1");
    return gamma_q(static_cast<double>(dof) / 2.0, x / 2.0);
}

}  // namespace lahja::math
