#include <doctest.h>

#include <cmath>

#include "nlss/scalar_profile.hpp"

using namespace nlss;

TEST_CASE("d = 1 closed form") {
    const auto Q = solve_Q(1, 4);
    CHECK(Q.closed_form);
    CHECK(Q.Q0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (double x : {0.0, 0.3, 1.7, 5.0})
        CHECK(Q(x) == doctest::Approx(std::sqrt(2.0) / std::cosh(x)).epsilon(1e-13));
    CHECK(Q.l2sq == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(Q.grad_sq == doctest::Approx(4.0 / 3).epsilon(1e-10));
    const double sp = s_p(1, 4);
    CHECK(sp == 0.25);
    CHECK(Q.grad_sq == doctest::Approx(sp / (1 - sp) * Q.l2sq).epsilon(1e-10));
    CHECK(Q.lp == doctest::Approx(Q.l2sq / (1 - sp)).epsilon(1e-10));
    CHECK(Q.elliptic_residual() <= 1e-10);

    // general p, still closed form
    const auto Q3 = solve_Q(1, 3);
    CHECK(Q3.Q0 == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(Q3.grad_sq == doctest::Approx(s_p(1, 3) / (1 - s_p(1, 3)) * Q3.l2sq).epsilon(1e-9));
}

TEST_CASE("rescale") {
    const auto Q = solve_Q(1, 4);
    const auto same = rescale(Q, 1, 1);
    for (double x : {0.0, 1.0, 3.0}) CHECK(same(x) == doctest::Approx(Q(x)));

    const auto Q4 = rescale(Q, 4, 1);
    for (double x : {0.0, 0.25, 1.0, 2.5})
        CHECK(Q4(x) == doctest::Approx(2 * std::sqrt(2.0) / std::cosh(2 * x)).epsilon(1e-12));
    CHECK(Q4.elliptic_residual() <= 1e-9);

    for (double om : {0.5, 2.0, 7.0}) {
        const auto Qo = rescale(Q, om, 1.3);
        const double want = std::pow(om / 1.3, 2 / (4 - 2.0)) * std::pow(om, -0.5) * Q.l2sq;
        CHECK(Qo.l2sq == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK_THROWS_AS(rescale(Q, 0, 1), ValidationError);
    CHECK_THROWS_AS(rescale(Q, 1, -1), ValidationError);
}

TEST_CASE("shooting profiles in d = 2, 3") {
    for (auto [d, p] : {std::pair{2, 4.0}, {3, 4.0}, {2, 3.0}, {3, 3.0}}) {
        const auto Q = solve_Q(d, p);
        CAPTURE(d);
        CAPTURE(p);
        CHECK_FALSE(Q.closed_form);
        // positive and decreasing
        bool ok = true;
        for (std::size_t i = 1; i < Q.Q.size(); ++i) ok = ok && Q.Q[i] > 0 && Q.Q[i] < Q.Q[i - 1];
        CHECK(ok);
        const double sp = s_p(d, p);
        CHECK(Q.grad_sq == doctest::Approx(sp / (1 - sp) * Q.l2sq).epsilon(1e-4));
        CHECK(Q.lp == doctest::Approx(Q.l2sq / (1 - sp)).epsilon(1e-4));
        CHECK(Q.elliptic_residual() <= 1e-5);
        CHECK(Q.R_match <= 0.75 * 20 + 1e-12);
    }
}

TEST_CASE("pinned golden values") {
    // Townes profile: |Q|_2^2 = 11.70089..., Q(0) = 2.20620...
    const auto T = solve_Q(2, 4);
    CHECK(T.l2sq == doctest::Approx(11.70089).epsilon(1e-5));
    CHECK(T.Q0 == doctest::Approx(2.206200864).epsilon(1e-7));
    // d = 3 cubic: Q(0) = 4.33738...
    CHECK(solve_Q(3, 4).Q0 == doctest::Approx(4.3373876).epsilon(1e-6));
}

TEST_CASE("reproducible and validated") {
    CHECK(solve_Q(2, 4).Q0 == solve_Q(2, 4).Q0);
    CHECK_THROWS_AS(solve_Q(4, 3), ValidationError);
    CHECK_THROWS_AS(solve_Q(3, 6), ValidationError);
    CHECK_THROWS_AS(solve_Q(1, 2), ValidationError);
    CHECK(sphere_area(1) == 2);
    CHECK(sphere_area(2) == doctest::Approx(2 * kPi));
    CHECK(sphere_area(3) == doctest::Approx(4 * kPi));
}

TEST_CASE("radial integral") {
    const auto Q = solve_Q(2, 4);
    std::vector<double> q2(Q.r.size());
    for (std::size_t i = 0; i < Q.r.size(); ++i) q2[i] = Q.Q[i] * Q.Q[i];
    CHECK(radial_integral(Q, q2) == doctest::Approx(Q.l2sq).epsilon(1e-6));
}
