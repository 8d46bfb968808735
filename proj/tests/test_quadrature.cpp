#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "torsion/quadrature.hpp"

using namespace torsion;
using Catch::Approx;

TEST_CASE("polynomials are exact") {
    const double v = integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-14);
    CHECK(v == Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("adaptive refinement reaches the tolerance") {
    // kinked integrand without a pinned breakpoint
    const double v =
        integrate([](double x) { return std::abs(x - 0.3712); }, 0.0, 1.0, 1e-12);
    const double exact = 0.5 * (0.3712 * 0.3712 + (1 - 0.3712) * (1 - 0.3712));
    CHECK(v == Approx(exact).epsilon(1e-11));
}

TEST_CASE("breakpoints pin kinks") {
    const std::vector<double> breaks{0.25};
    const double v = integrate([](double x) { return x < 0.25 ? 1.0 : 2.0; }, 0.0, 1.0,
                               breaks, 1e-13);
    CHECK(v == Approx(0.25 + 1.5).epsilon(1e-14));
}

TEST_CASE("logarithmic integrand") {
    const double v = integrate([](double x) { return std::log(x) * x; }, 1e-6, 1.0, 1e-13);
    // int x log x = x^2/2 (log x - 1/2)
    auto F = [](double x) { return 0.5 * x * x * (std::log(x) - 0.5); };
    CHECK(v == Approx(F(1.0) - F(1e-6)).epsilon(1e-11));
}

TEST_CASE("non-convergence raises with the failing interval") {
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / (x - 0.5)); }, 0.0, 1.0,
                              1e-300, 6),
                    std::runtime_error);
}
