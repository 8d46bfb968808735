#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

// Adaptive composite Gauss-Legendre quadrature.  15-point panels, recursive
// bisection against an absolute tolerance, with caller-supplied breakpoints so
// panel boundaries can be pinned at known kinks of the integrand.

namespace torsion {

namespace detail {

// Gauss-Legendre 15-point rule on [-1, 1] (positive half; the rule is symmetric).
inline constexpr std::array<double, 8> kGlNode = {
    0.0,
    0.2011940939974345223006283,
    0.3941513470775633698972074,
    0.5709721726085388475372267,
    0.7244177313601700474161861,
    0.8482065834104272162006483,
    0.9372733924007059043077589,
    0.9879925180204854284895657,
};
inline constexpr std::array<double, 8> kGlWeight = {
    0.2025782419255612728806202,
    0.1984314853271115764561183,
    0.1861610000155622110268006,
    0.1662692058169939335532009,
    0.1395706779261543144478048,
    0.1071592204671719350118695,
    0.07036604748810812470926742,
    0.03075324199611726835462839,
};

template <class F>
double gauss15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = kGlWeight[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGlNode[i];
        acc += kGlWeight[i] * (f(mid - dx) + f(mid + dx));
    }
    return acc * half;
}

template <class F>
double adapt(F&& f, double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss15(f, a, mid);
    const double right = gauss15(f, mid, b);
    const double sum = left + right;
    if (std::abs(sum - whole) <= tol || b - a < 1e-15 * (std::abs(a) + std::abs(b)))
        return sum;
    if (depth <= 0) {
        std::ostringstream msg;
        msg << "quadrature failed to converge on [" << a << ", " << b
            << "], residual " << std::abs(sum - whole) << " vs tolerance " << tol;
        throw std::runtime_error(msg.str());
    }
    return adapt(f, a, mid, left, 0.5 * tol, depth - 1) +
           adapt(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    return detail::adapt(f, a, b, detail::gauss15(f, a, b), abs_tol, max_depth);
}

// Integration over [a, b] with interior breakpoints (kink locations); the
// tolerance is shared out per panel by length.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breaks, double abs_tol,
                 int max_depth = 48) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15 * (b - a)) continue;
        const double share = abs_tol * (cuts[i + 1] - cuts[i]) / (b - a);
        acc += integrate(f, cuts[i], cuts[i + 1], std::max(share, 1e-300), max_depth);
    }
    return acc;
}

}  // namespace torsion
