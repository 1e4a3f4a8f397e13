#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nlss/sphere_critical.hpp"

using namespace nlss;

namespace {

double ftrig(double th, double rho, double tau) { return std::sin(2 * th) + rho * std::sin(th - tau); }

// roots by a dense sign scan, refined by bisection
std::vector<double> scan_roots(double rho, double tau, int n = 1000000) {
    std::vector<double> out;
    const double h = 2 * kPi / n;
    double a = 0, fa = ftrig(0, rho, tau);
    for (int i = 1; i <= n; ++i) {
        const double b = i * h, fb = ftrig(b, rho, tau);
        if (fa == 0) out.push_back(a);
        else if (fa * fb < 0) {
            double lo = a, hi = b;
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (lo + hi);
                (ftrig(lo, rho, tau) * ftrig(m, rho, tau) <= 0 ? hi : lo) = m;
            }
            out.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    return out;
}

std::vector<double> roots_of(const TrigSolveResult& r) {
    std::vector<double> v;
    for (const auto& t : r.theta)
        if (t) v.push_back(*t);
    std::sort(v.begin(), v.end());
    return v;
}

double grad_norm(const GForm& g, const CPair& w) {
    const auto [nu, zeta] = SphereChart::coords(w, g.gauge());
    const auto gr = chart_gradient(g, nu, zeta);
    return std::abs(gr[0]) + std::abs(gr[1]);
}

}  // namespace

TEST_CASE("solve_trig at tau = pi/2") {
    const auto r = solve_trig(1.0, kPi / 2);
    REQUIRE(r.theta[0]);
    CHECK(*r.theta[0] == doctest::Approx(kPi / 6).epsilon(1e-13));
    CHECK(*r.theta[1] == doctest::Approx(kPi / 2).epsilon(1e-13));
    CHECK(*r.theta[2] == doctest::Approx(5 * kPi / 6).epsilon(1e-13));
    CHECK(*r.theta[3] == doctest::Approx(1.5 * kPi).epsilon(1e-13));
    CHECK(r.count == 4);
    CHECK(rho_star(kPi / 2) == 2.0);
}

TEST_CASE("solve_trig at rho = 0") {
    for (double tau : {0.3, 1.0, kPi / 2, 2.5}) {
        const auto r = solve_trig(0.0, tau);
        for (int j = 0; j < 4; ++j) {
            REQUIRE(r.theta[j]);
            CHECK(*r.theta[j] == doctest::Approx(j * kPi / 2).epsilon(1e-12));
        }
    }
}

TEST_CASE("solve_trig against a sign-scan oracle") {
    const auto r = solve_trig(0.5, kPi / 3);
    CHECK(r.count == 4);
    const auto got = roots_of(r);
    const auto want = scan_roots(0.5, kPi / 3);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));
    for (double t : got) CHECK(std::abs(ftrig(t, 0.5, kPi / 3)) <= 1e-12);
}

TEST_CASE("root count pattern and rho_*") {
    for (double tau : {0.2, 0.9, 1.4, 2.1, 2.9}) {
        const double rs = rho_star(tau);
        CHECK(rs > 1.0);
        CHECK(rs <= 2.0 + 1e-12);
        CHECK(solve_trig(0.9 * rs, tau).count == 4);
        CHECK(solve_trig(1.1 * rs, tau).count == 2);
        CHECK(scan_roots(0.99 * rs, tau, 200000).size() == 4);
        CHECK(scan_roots(1.01 * rs, tau, 200000).size() == 2);
        // symmetric in tau -> pi - tau
        CHECK(rho_star(kPi - tau) == doctest::Approx(rs).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_trig(-1, 1.0), ValidationError);
    CHECK_THROWS_AS(solve_trig(1, 0.0), ValidationError);
}

TEST_CASE("theta_3 is the unique minimizer of cos 2t + 2 rho cos(t - tau)") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> R(0.01, 4), T(0.01, kPi - 0.01);
    for (int k = 0; k < 200; ++k) {
        const double rho = R(rng), tau = T(rng);
        const auto r = solve_trig(rho, tau);
        REQUIRE(r.theta[3]);
        auto q = [&](double t) { return std::cos(2 * t) + 2 * rho * std::cos(t - tau); };
        double best = 1e300, bt = 0;
        for (int i = 0; i < 20000; ++i) {
            const double t = 2 * kPi * i / 20000;
            if (q(t) < best) best = q(t), bt = t;
        }
        CHECK(q(*r.theta[3]) <= best + 1e-12);
        const double d = std::remainder(*r.theta[3] - bt, 2 * kPi);
        CHECK(std::abs(d) <= 1e-3);
    }
}

TEST_CASE("gmin_analytic examples") {
    const auto a3 = gmin_analytic(GForm::nls3(0.8, 0.6, 0));
    CHECK(a3.g_min == doctest::Approx(1.6).epsilon(1e-14));
    REQUIRE(a3.T0.size() == 1);
    CHECK(a3.T0[0].label == "A9");

    CHECK(gmin_analytic(GForm::nls3(0.8, 0.6, -2)).g_min == doctest::Approx(-0.4).epsilon(1e-13));
    CHECK(gmin_analytic(GForm::nls1(1, 0)).g_min == doctest::Approx(0.0));
    CHECK(gmin_analytic(GForm::nls4(0, 0.6, 0.8, 0)).g_min == doctest::Approx(-17.0 / 15).epsilon(1e-13));
    CHECK(gmin_analytic(GForm::nls1(-1, -1)).g_min == doctest::Approx(-1.0));
    CHECK_THROWS_AS(gmin_analytic(GForm::from_lambdas(*GForm::nls1(1, -1).lambdas())), ValidationError);
}

TEST_CASE("gmin_numeric agrees with the analytic tables") {
    NumericOptions opt;
    opt.grid = 512;
    const std::vector<GForm> forms = {GForm::nls1(1, -1),
                                      GForm::nls2(0.3, -0.7, -1),
                                      GForm::nls3(0.8, 0.6, -2),
                                      GForm::nls3(-0.6, 0.8, 0.5),
                                      GForm::nls4(0, 0.6, 0.8, 0),
                                      GForm::nls4(0.1, 0.2, std::sqrt(0.95), 1),
                                      GForm::nls5(0.3, 0.5, std::sqrt(0.66), 0.4, 1.1),
                                      GForm::nls5(0.6, 0.1, std::sqrt(0.63), -1, 2.5),
                                      GForm::colin_ohta(2, 0.5),
                                      GForm::colin_ohta(0.5, 0.5)};
    for (const auto& g : forms) {
        const auto an = gmin_analytic(g);
        const auto nu = gmin_numeric(g, opt);
        CHECK(nu.g_min == doctest::Approx(an.g_min).epsilon(1e-7));
        // each analytic generator is close to some numeric minimizer
        for (const auto& s : an.T0)
            for (const auto& w : s.generators) {
                double best = 1e9;
                for (const auto& m : nu.minimizers) best = std::min(best, orbit_distance(w, m, g.gauge()));
                if (s.kind == OrbitKind::Point) CHECK(best <= 1e-5);
            }
    }
}

TEST_CASE("degenerate and scaled minima") {
    NumericOptions opt;
    opt.grid = 256;
    const auto deg = gmin_numeric(GForm::nls2(0, 0, -1), opt);
    CHECK(deg.g_min == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(deg.degenerate);

    const GForm g = GForm::nls3(0.8, 0.6, -2);
    const double base = gmin_numeric(g, opt).g_min;
    const GForm g3 = GForm::from_lambdas([&] {
        auto l = *g.lambdas();
        for (auto& x : l) x *= 3;
        return l;
    }());
    CHECK(gmin_numeric(g3, opt).g_min == doctest::Approx(3 * base).epsilon(1e-9));
}

TEST_CASE("critical points are critical") {
    const std::vector<GForm> forms = {GForm::nls1(1, -1),
                                      GForm::nls2(0.3, -0.7, -1),
                                      GForm::nls3(0.8, 0.6, -2),
                                      GForm::nls4(0.1, 0.2, std::sqrt(0.95), 1),
                                      GForm::nls5(0.3, 0.5, std::sqrt(0.66), 0.4, 1.1),
                                      GForm::colin_ohta(2, 0.5),
                                      GForm::colin_ohta(0, 2)};
    for (const auto& g : forms) {
        for (const auto& s : critical_points(g)) {
            if (!s.exists) continue;
            INFO(g.name(), " ", s.label);
            for (const auto& w : s.generators) {
                CHECK(std::sqrt(norm2(w)) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(lagrange_residual(g, w) <= 1e-9);
                CHECK(g(w) == doctest::Approx(s.value).epsilon(1e-12));
                if (std::abs(w[0]) > 1e-3 && std::abs(w[1]) > 1e-3) CHECK(grad_norm(g, w) <= 1e-9);
            }
        }
    }
}

TEST_CASE("NLS4 with large alpha3 has exactly the two first-case families") {
    // alpha3 >= max(2 alpha2, |alpha1 + alpha2|)
    const GForm g = GForm::nls4(0.1, 0.2, std::sqrt(0.95), 1);
    int n = 0;
    for (const auto& s : critical_points(g))
        if (s.exists) {
            ++n;
            CHECK((s.label == "A11" || s.label == "A12"));
        }
    CHECK(n == 2);
}

TEST_CASE("Colin-Ohta families") {
    // gamma = 2, kappa = 0: semitrivial value -1, nu1 and nu3 exist; nu3 is not in J3
    const GForm g = GForm::colin_ohta(0, 2);
    bool semi = false, nu1 = false, nu3 = false;
    for (const auto& s : critical_points(g)) {
        if (s.label == "A0") {
            semi = true;
            CHECK(s.value == doctest::Approx(-1.0));
        }
        // labels are A1/A3 inside J_m, nu1/nu3 outside
        if (s.label.rfind("A1", 0) == 0) nu1 = true;
        if (s.label.rfind("nu3", 0) == 0) {
            nu3 = true;
            CHECK(s.value > 0);
        }
    }
    CHECK(semi);
    CHECK(nu1);
    CHECK(nu3);
    CHECK(co_in_J(1, 2, 0));
    CHECK_FALSE(co_in_J(3, 2, 0));

    // closed-form critical values along zeta = 0
    for (auto [gamma, kappa] : {std::pair{0.5, 2.0}, {0.3, 1.5}, {0.8, 0.9}}) {
        const GForm c = GForm::colin_ohta(kappa, gamma);
        const double b1 = kappa - std::sqrt(kappa * kappa + 2 * gamma * (gamma - 1));
        const double want = -(b1 / (2 * std::abs(b1))) / std::sqrt(gamma * gamma + b1 * b1) * (b1 * b1 + 2 * gamma);
        CHECK(c.h(co_nu(2, gamma, kappa), 0) == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(co_kappa_c(0.5) == doctest::Approx(1.25 * std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("chart and orbit helpers") {
    const CPair w = SphereChart::point(0.4, 1.1, 0.3);
    CHECK(std::sqrt(norm2(w)) == doctest::Approx(1.0));
    const auto [nu, zeta] = SphereChart::coords(w, {1, 1});
    CHECK(nu == doctest::Approx(0.4));
    CHECK(zeta == doctest::Approx(1.1));
    const CPair v{w[0] * std::polar(1.0, 0.9), w[1] * std::polar(1.0, 0.9)};
    CHECK(orbit_distance(w, v, {1, 1}) <= 1e-12);
    CHECK(orbit_distance(w, SphereChart::point(0.4, -1.1), {1, 1}) > 0.1);
}
