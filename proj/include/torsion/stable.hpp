#pragma once

#include <cmath>
#include <stdexcept>

// Cancellation-safe building blocks shared by the radial formulas and the
// threshold functions. Everything is evaluated in long double: the lemma
// coefficients grow like d^2 and several quantities are probed right at the
// endpoints t -> 0, t -> 1 where naive evaluation loses all digits.

namespace torsion::stable {

// log(1 - t^d) for t in [0,1), usable even when t^d underflows the digits of 1.
inline long double log_one_minus_pow(long double t, int d) {
    if (t <= 0.0L) return 0.0L;
    return std::log1p(-std::pow(t, static_cast<long double>(d)));
}

// (1-u)^p via the exp/log1p route; exact at u = 0 and u = 1.
inline long double pow1m(long double p, long double u) {
    if (u >= 1.0L) return 0.0L;
    if (u <= 0.0L) return 1.0L;
    return std::exp(p * std::log1p(-u));
}

// (1-u)^p - 1, preserving relative accuracy for small u.
inline long double pow1m_m1(long double p, long double u) {
    if (u >= 1.0L) return -1.0L;
    return std::expm1(p * std::log1p(-u));
}

// q(p,u) = (1-u)^p - 1 + p*u.  O(u^2) for small u, so it cannot be formed
// from pow1m_m1 directly without losing the leading digits; a binomial
// series handles u <= 1/4, the direct form is fine elsewhere.
inline long double pow1m_corr(long double p, long double u) {
    if (u <= 0.0L) return 0.0L;
    if (u <= 0.25L) {
        long double term = p * (p - 1.0L) / 2.0L * u * u;  // k = 2
        long double sum = term;
        for (int k = 2; k < 96; ++k) {
            term *= -(p - k) / (k + 1.0L) * u;
            long double next = sum + term;
            if (next == sum) break;
            sum = next;
        }
        return sum;
    }
    return pow1m(p, u) - 1.0L + p * u;
}

// Binomial coefficient as long double; n stays small here (<= 2d <= 128).
inline long double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    k = std::min(k, n - k);
    long double c = 1.0L;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace torsion::stable
