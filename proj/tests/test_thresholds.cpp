#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "torsion/radial.hpp"
#include "torsion/thresholds.hpp"

using namespace torsion;
using Catch::Approx;

// Frozen expected values computed with 40+ digit arithmetic from the printed
// formulas, independently of the implementation below.

TEST_CASE("threshold values at interior points") {
    CHECK(threshold(ThresholdKind::planar_perimeter, 2, 0.5) ==
          Approx(5.4754813783399429751).epsilon(1e-14));
    CHECK(threshold(ThresholdKind::planar_perimeter, 2, 0.75) ==
          Approx(6.906013741641389991503).epsilon(1e-14));
    CHECK(threshold(ThresholdKind::threed_perimeter, 3, 0.5) ==
          Approx(25.0 / 9.0).epsilon(1e-14));
    CHECK(threshold(ThresholdKind::threed_volume, 3, 0.5) ==
          Approx(1.5331623765299781155).epsilon(1e-14));
    CHECK(threshold(ThresholdKind::general_perimeter, 4, 0.5) ==
          Approx(2.7761194029850746269).epsilon(1e-14));
    CHECK(threshold(ThresholdKind::general_volume, 5, 0.3) ==
          Approx(1.1494877255325716687).epsilon(1e-13));
    CHECK(threshold(ThresholdKind::general_perimeter, 7, 0.8) ==
          Approx(5.188416931763006757175).epsilon(1e-13));
    CHECK(threshold(ThresholdKind::general_volume, 7, 0.8) ==
          Approx(3.113875142445235698914).epsilon(1e-13));
}

TEST_CASE("threshold values survive the endpoint regions") {
    CHECK(threshold(ThresholdKind::planar_perimeter, 2, 1e-4) ==
          Approx(4.000000378413652570335).epsilon(1e-13));
    CHECK(threshold(ThresholdKind::threed_perimeter, 3, 1e-4) ==
          Approx(2.00000003599700064791).epsilon(1e-13));
    CHECK(threshold(ThresholdKind::general_perimeter, 12, 1e-4) ==
          Approx(2.00000002057142878302).epsilon(1e-13));
    CHECK(threshold(ThresholdKind::general_volume, 12, 1e-4) ==
          Approx(1.000000011220779346685).epsilon(1e-12));
    CHECK(threshold(ThresholdKind::general_volume, 12, 1.0 - 1e-4) ==
          Approx(13.97061420030058144207).epsilon(1e-12));
}

TEST_CASE("endpoint limits carry the limit flag") {
    const auto p0 = threshold_point(ThresholdKind::planar_perimeter, 2, 0.0);
    CHECK(p0.at_endpoint);
    CHECK(p0.value == 4.0);
    const auto p1 = threshold_point(ThresholdKind::planar_perimeter, 2, 1.0);
    CHECK(p1.at_endpoint);
    CHECK(p1.value == 8.0);
    CHECK(threshold_point(ThresholdKind::threed_perimeter, 3, 0.0).value == 2.0);
    CHECK(threshold_point(ThresholdKind::threed_perimeter, 3, 1.0).value == 5.0);
    CHECK(threshold_point(ThresholdKind::threed_volume, 3, 0.0).value == 1.0);
    CHECK(threshold_point(ThresholdKind::general_perimeter, 9, 1.0).value == 11.0);
    CHECK(threshold_point(ThresholdKind::general_volume, 9, 1.0).value == 11.0);
    CHECK_FALSE(threshold_point(ThresholdKind::planar_perimeter, 2, 0.5).at_endpoint);
}

TEST_CASE("kind and argument validation") {
    CHECK_THROWS_AS(threshold(ThresholdKind::planar_perimeter, 3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(threshold(ThresholdKind::threed_volume, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(threshold(ThresholdKind::general_volume, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(threshold(ThresholdKind::general_volume, 4, 1.5), std::invalid_argument);
}

TEST_CASE("planar bound convention") {
    // the planar threshold bounds -2 alpha R; the helper halves it
    CHECK(planar_alpha_bound(0.5) ==
          Approx(0.5 * threshold(ThresholdKind::planar_perimeter, 2, 0.5)).epsilon(1e-15));
}

TEST_CASE("d=3 specializations match the general kinds pointwise") {
    for (int i = 0; i <= 2000; ++i) {
        const double t = 1e-4 + (1.0 - 2e-4) * i / 2000;
        const double per3 = threshold(ThresholdKind::threed_perimeter, 3, t);
        const double genp = threshold(ThresholdKind::general_perimeter, 3, t);
        REQUIRE(std::abs(per3 - genp) <= 1e-12 * std::max(1.0, std::abs(genp)));
        const double vol3 = threshold(ThresholdKind::threed_volume, 3, t);
        const double genv = threshold(ThresholdKind::general_volume, 3, t);
        REQUIRE(std::abs(vol3 - genv) <= 1e-12 * std::max(1.0, std::abs(genv)));
    }
}

TEST_CASE("certified minima clear the proven bounds") {
    CHECK(certified_minimum(ThresholdKind::planar_perimeter, 2).pass);
    CHECK(certified_minimum(ThresholdKind::threed_perimeter, 3).pass);
    CHECK(certified_minimum(ThresholdKind::threed_volume, 3).pass);
    for (int d = 3; d <= 12; ++d) {
        const auto per = certified_minimum(ThresholdKind::general_perimeter, d);
        CHECK(per.pass);
        CHECK(per.bound == 2.0);
        CHECK(per.argmin < 0.01);  // infimum approached toward t -> 0
        const auto vol = certified_minimum(ThresholdKind::general_volume, d);
        CHECK(vol.pass);
        CHECK(vol.bound == 1.0);
    }
    const auto planar = certified_minimum(ThresholdKind::planar_perimeter, 2);
    CHECK(planar.bound == 4.0);
    CHECK(planar.argmin < 0.01);
}

TEST_CASE("lemma function values") {
    // boundary identities
    for (int d = 3; d <= 12; ++d) {
        CHECK(lemma_function(LemmaId::g, d, 0.0) == Approx(0.0).margin(1e-14));
        CHECK(lemma_function(LemmaId::g, d, 1.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::h, d, 0.0) == Approx(d * d - 3 * d + 2).epsilon(1e-13));
        CHECK(lemma_function(LemmaId::h, d, 1.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::m, d, 0.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::m, d, 1.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::M, d, 0.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::M, d, 1.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::k, d, 0.0) == Approx(0.0).margin(1e-14));
        CHECK(lemma_function(LemmaId::k, d, 1.0) == Approx(0.0).margin(1e-12));
        CHECK(lemma_function(LemmaId::f, d, 0.0) == 0.0);
        CHECK(lemma_function(LemmaId::f, d, 1.0) == 1.0);
    }
    // frozen high-precision samples
    CHECK(lemma_function(LemmaId::g, 3, 0.5) == Approx(0.2223481240675250194).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::h, 3, 0.5) == Approx(0.58517357249425712069).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::k, 3, 0.5) == Approx(0.11854765424482406357).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::m, 3, 0.5) == Approx(0.69904603721747010518).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::M, 3, 0.3) == Approx(-0.49139105665559135071).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::f, 3, 0.5) == Approx(0.08517357249425712069).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::g, 5, 0.5) == Approx(0.33734894210138786546).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::k, 5, 0.5) == Approx(0.16641603059493556104).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::m, 5, 0.5) == Approx(4.9310451371633574341).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::M, 5, 0.3) == Approx(-3.6629806532787630969).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::g, 12, 0.5) == Approx(0.022543210126250742286).epsilon(1e-12));
    CHECK(lemma_function(LemmaId::h, 12, 0.5) == Approx(74.006266317439957743).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::k, 12, 0.5) == Approx(0.0087795647803828148402).epsilon(1e-12));
    CHECK(lemma_function(LemmaId::M, 12, 0.3) == Approx(-39.634936315038009061).epsilon(1e-13));
    CHECK(lemma_function(LemmaId::f, 12, 0.5) ==
          Approx(0.00022379784968369208867).epsilon(1e-12));
}

TEST_CASE("derivative identities by central differences") {
    const double step = 1e-6;
    for (int d : {3, 5, 8, 12}) {
        for (int i = 0; i <= 90; ++i) {
            const double t = 0.05 + 0.9 * i / 90.0;
            const double dg = (lemma_function(LemmaId::g, d, t + step) -
                               lemma_function(LemmaId::g, d, t - step)) /
                              (2.0 * step);
            const double rhs_g =
                (d + 2) * std::pow(t, d - 1) * lemma_function(LemmaId::h, d, t);
            REQUIRE(dg == Approx(rhs_g).epsilon(1e-6));
            const double dk = (lemma_function(LemmaId::k, d, t + step) -
                               lemma_function(LemmaId::k, d, t - step)) /
                              (2.0 * step);
            const double rhs_k =
                (d + 2) * std::pow(t, d - 1) * lemma_function(LemmaId::m, d, t);
            REQUIRE(dk == Approx(rhs_k).epsilon(1e-6).margin(1e-9));
        }
    }
}

TEST_CASE("substitution identity M(1 - t^d) = m(t)") {
    for (int d : {3, 4, 7, 12}) {
        for (int i = 1; i < 64; ++i) {
            const double t = static_cast<double>(i) / 64.0;
            // rounding u = 1 - t^d to double perturbs t^d by eps in absolute
            // terms; skip nodes where that alone moves M past the tolerance
            const double conditioning = 2.0 * d * t * t * 2.3e-16 / std::pow(t, d);
            if (conditioning > 3e-13) continue;
            const double u = -std::expm1(d * std::log(t));
            REQUIRE(lemma_function(LemmaId::M, d, u) ==
                    Approx(lemma_function(LemmaId::m, d, t)).margin(1e-12).epsilon(1e-12));
        }
    }
}

TEST_CASE("sign patterns match the lemma structure") {
    for (int d = 3; d <= 12; ++d) {
        const auto g = sign_pattern(LemmaId::g, d);
        CHECK(g.structure_ok);
        CHECK(g.roots.empty());
        CHECK(g.critical_points.size() == 1);

        const auto h = sign_pattern(LemmaId::h, d);
        CHECK(h.structure_ok);
        REQUIRE(h.roots.size() == 1);
        CHECK(lemma_function(LemmaId::h, d, 0.5 * h.roots[0].lo) > 0.0);
        CHECK(lemma_function(LemmaId::h, d, 0.5 * (h.roots[0].hi + 1.0)) < 0.0);

        const auto k = sign_pattern(LemmaId::k, d);
        CHECK(k.structure_ok);
        CHECK(k.critical_points.size() == 1);

        const auto m = sign_pattern(LemmaId::m, d);
        CHECK(m.structure_ok);
        REQUIRE(m.roots.size() == 1);

        const auto M = sign_pattern(LemmaId::M, d);
        CHECK(M.structure_ok);
        REQUIRE(M.roots.size() == 1);
        REQUIRE(M.critical_points.size() == 2);
        CHECK(M.critical_points[0].midpoint() < M.roots[0].midpoint());
        CHECK(M.roots[0].midpoint() < M.critical_points[1].midpoint());
        // g's maximum sits at h's root; k's at m's root
        const auto gmax = sign_pattern(LemmaId::g, d).critical_points[0].midpoint();
        CHECK(gmax == Approx(h.roots[0].midpoint()).margin(1e-9));
    }
    CHECK_THROWS_AS(sign_pattern(LemmaId::f, 3), std::invalid_argument);
}

TEST_CASE("k stays strictly positive at interior grid nodes") {
    for (int d : {3, 7, 12}) {
        for (int i = 1; i < 4096; ++i) {
            const double t = static_cast<double>(i) / 4096.0;
            REQUIRE(lemma_function(LemmaId::k, d, t) > 0.0);
        }
    }
}

TEST_CASE("quantitative gap frozen examples") {
    const auto per3 = quantitative_gap(3, ShellGeometry(3, 1.0, 2.0), Constraint::perimeter);
    CHECK(per3.lhs == Approx(3.76991118430775189).epsilon(1e-12));
    CHECK(per3.rhs == Approx(5.23598775598298873).epsilon(1e-12));
    CHECK(per3.margin > 0.0);

    const auto vol5 = quantitative_gap(5, ShellGeometry(5, 0.5, 1.0), Constraint::volume);
    CHECK(vol5.lhs == Approx(0.0169117490979895716).epsilon(1e-11));
    CHECK(vol5.rhs == Approx(0.0252544050368929233).epsilon(1e-11));
    CHECK(vol5.margin > 0.0);
}

TEST_CASE("quantitative gap margin over the (d, t) grid") {
    for (int d = 3; d <= 12; ++d) {
        for (int i = 1; i <= 99; ++i) {
            const double t = i / 100.0;
            const auto q = quantitative_gap(d, ShellGeometry(d, t, 1.0),
                                            i % 2 ? Constraint::perimeter : Constraint::volume);
            REQUIRE(q.lhs > 0.0);
            REQUIRE(q.rhs > 0.0);
            REQUIRE(q.margin >= -1e-10 * q.rhs);
        }
    }
}

TEST_CASE("both constraints shrink to zero as the shell degenerates to a ball") {
    const auto q = quantitative_gap(3, ShellGeometry(3, 1e-7, 1.0), Constraint::perimeter);
    CHECK(std::abs(q.lhs) <= 1e-12);
    CHECK(std::abs(q.rhs) <= 1e-12);
}

TEST_CASE("gap-ratio form agrees with the threshold formulas") {
    // -alpha R <= (|B_R|^2/|dB_R| - |Omega|^2/|dOmega|) R / (tau_D(B_R) - tau_DN)
    for (int d : {3, 5, 9}) {
        for (double t : {0.15, 0.4, 0.65, 0.9}) {
            const ShellGeometry shell(d, t, 1.0);
            for (auto con : {Constraint::perimeter, Constraint::volume}) {
                const auto q = quantitative_gap(d, shell, con);
                const double R = con == Constraint::perimeter
                                     ? 1.0
                                     : std::pow(1.0 - std::pow(t, d), 1.0 / d);
                const double c = con == Constraint::perimeter ? 0.5 : 1.0;
                const double ratio_form = (q.rhs / c) / q.lhs;  // R (gap ratio) / gap
                const auto kind = con == Constraint::perimeter
                                      ? ThresholdKind::general_perimeter
                                      : ThresholdKind::general_volume;
                // the volume-kind ratio uses t = R1/R2 directly
                const double thr = threshold(kind, d, t);
                REQUIRE(ratio_form == Approx(thr).epsilon(1e-9));
                (void)R;
            }
        }
    }
}

TEST_CASE("applicability certificate") {
    // ball itself: t = 0, certificate holds through the admissible window
    const auto dc = dimensional_constants(2);
    const auto ball_case = applicability_certificate(2, dc.ball_volume, dc.sphere_area, -0.5,
                                                     Constraint::perimeter, 1.0);
    CHECK(ball_case.matched_ratio == Approx(0.0).margin(1e-7));
    CHECK(ball_case.certified);

    // unit square under perimeter constraint: matched t ~ 0.4633, threshold holds
    const auto square = applicability_certificate(2, 1.0, 4.0, -0.5, Constraint::perimeter);
    CHECK(square.matched_ratio == Approx(0.4632513751761042429214).epsilon(1e-10));
    CHECK(square.alpha_r == Approx(0.5 * 2.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(square.threshold_clause);
    CHECK(square.sigma_clause == ClauseState::unknown);  // deferred to a measurement
    CHECK(square.certified);

    // below the critical parameter: refused outright
    const auto below = applicability_certificate(2, 1.0, 4.0, -20.0, Constraint::perimeter);
    CHECK(below.below_critical);
    CHECK_FALSE(below.certified);

    // higher-dimensional shell data under volume constraint
    const auto dc5 = dimensional_constants(5);
    const double vol = dc5.ball_volume * (1.0 - std::pow(0.5, 5));
    const double sur = dc5.sphere_area;
    const auto shell5 = applicability_certificate(5, vol, sur, -0.3, Constraint::volume, 1.0);
    CHECK(shell5.matched_ratio == Approx(0.5).epsilon(1e-12));
    CHECK(shell5.certified);

    CHECK_THROWS_AS(applicability_certificate(2, 1.0, 4.0, 0.5, Constraint::perimeter),
                    std::invalid_argument);
    CHECK_THROWS_AS(applicability_certificate(2, 1.0, 4.0, -0.5, Constraint::volume),
                    std::invalid_argument);
}

TEST_CASE("sigma clause rejects alpha outside the window") {
    const auto dec =
        applicability_certificate(2, 1.0, 4.0, -1.2, Constraint::perimeter, 1.0);
    CHECK(dec.sigma_clause == ClauseState::fails);
    CHECK_FALSE(dec.certified);
}
