#include <doctest.h>

#include <cmath>
#include <random>

#include "nlss/system_model.hpp"
#include "test_util.hpp"

using namespace nlss;
using testutil::random_pair;

namespace {

std::vector<GForm> sample_forms() {
    return {GForm::nls1(1, -1),
            GForm::nls1(-1, -1),
            GForm::nls2(0.3, -0.7, -1),
            GForm::nls3(0.8, 0.6, -2),
            GForm::nls4(0.1, 0.2, std::sqrt(0.95), 1),
            GForm::nls5(0.3, 0.5, std::sqrt(0.66), 0.4, 1.1),
            GForm::colin_ohta(2, 0.5)};
}

LambdasT<Rational> nls3_rational(const Rational& a1, const Rational& a2, const Rational& r) {
    LambdasT<Rational> l;
    for (auto& x : l) x = 0;
    l[0] = l[11] = 3 * a1 + a2 + r;
    l[3] = l[7] = 2 * (a1 - a2) + r;
    l[4] = l[8] = a1 - a2;
    return l;
}

double max_diff(const Lambdas& a, const Lambdas& b) {
    double m = 0;
    for (int i = 0; i < 12; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("eval_g closed forms") {
    CHECK(eval_g(GForm::nls1(1, -1), {1.0, 0.0}) == doctest::Approx(1.0));
    for (const auto& g : sample_forms()) CHECK(eval_g(g, {0.0, 0.0}) == 0.0);
    const double s = 1 / std::sqrt(2.0);
    CHECK(eval_g(GForm::nls3(1, 0, 0), {cplx(s, 0), cplx(0, s)}) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("g is homogeneous, real and gauge invariant") {
    std::mt19937_64 rng(7);
    for (const auto& g : sample_forms()) {
        const auto n = g.gauge();
        for (int k = 0; k < 50; ++k) {
            const CPair z = random_pair(rng);
            const double gz = g(z);
            CHECK(g(scale(z, 1.7)) == doctest::Approx(std::pow(1.7, g.degree()) * gz).epsilon(1e-12));
            const CPair zt{z[0] * std::polar(1.0, n[0] * 0.7), z[1] * std::polar(1.0, n[1] * 0.7)};
            CHECK(g(zt) == doctest::Approx(gz).epsilon(1e-12));
        }
    }
}

TEST_CASE("F: homogeneity, gauge covariance, Wirtinger agreement, mass current") {
    std::mt19937_64 rng(11);
    for (const auto& g : sample_forms()) {
        const SystemSpec s = SystemSpec::from_form(g);
        const auto n = g.gauge();
        const double p = g.degree();
        double werr = 0, cur = 0;
        for (int k = 0; k < 1000; ++k) {
            const CPair z = random_pair(rng);
            const CPair F = eval_F(s, z);
            const CPair Fn = numeric_wirtinger([&](const CPair& x) { return g(x); }, p, z, 1e-5);
            werr = std::max(werr, std::max(std::abs(F[0] - Fn[0]), std::abs(F[1] - Fn[1])) /
                                      std::max(1.0, std::pow(std::sqrt(norm2(z)), p - 1)));
            cur = std::max(cur, std::abs(n[0] * std::imag(F[0] * std::conj(z[0])) +
                                         n[1] * std::imag(F[1] * std::conj(z[1]))));
            if (k < 20) {
                const CPair F2 = eval_F(s, scale(z, 2.0));
                CHECK(std::abs(F2[0] - std::pow(2.0, p - 1) * F[0]) <= 1e-11 * (1 + std::abs(F2[0])));
                const CPair zt{z[0] * std::polar(1.0, n[0] * 0.7), z[1] * std::polar(1.0, n[1] * 0.7)};
                const CPair Ft = eval_F(s, zt);
                for (int j = 0; j < 2; ++j)
                    CHECK(std::abs(Ft[j] - std::polar(1.0, n[j] * 0.7) * F[j]) <= 1e-11 * (1 + std::abs(F[j])));
            }
        }
        CHECK(werr <= 1e-8);
        CHECK(cur <= 1e-10);
    }
}

TEST_CASE("Colin-Ohta right-hand sides") {
    const double kappa = 1.3, gamma = 0.7;
    const SystemSpec s = SystemSpec::from_form(GForm::colin_ohta(kappa, gamma));
    CHECK(s.n == std::array<int, 2>{1, 2});
    CHECK(s.p == 3);
    const CPair z{cplx(0.4, -0.3), cplx(-0.2, 0.9)};
    const CPair F = eval_F(s, z);
    const cplx F1 = -kappa * std::abs(z[0]) * z[0] - gamma * std::conj(z[0]) * z[1];
    const cplx F2 = -std::abs(z[1]) * z[1] - gamma / 2 * z[0] * z[0];
    CHECK(std::abs(F[0] - F1) <= 1e-13);
    CHECK(std::abs(F[1] - F2) <= 1e-13);
}

TEST_CASE("lambdas <-> (C, V) examples") {
    const auto z = lambdas_to_cv(Lambdas{});
    for (auto& row : z.C)
        for (double x : row) CHECK(x == 0);
    for (double x : z.vvec) CHECK(x == 0);

    Lambdas l8{};
    l8[7] = 1;
    const auto m8 = lambdas_to_cv(l8);
    CHECK(m8.vvec[0] == 1);
    CHECK(m8.C[0][1] == 1);

    const Lambdas l2 = *GForm::nls2(1, -1, 1).lambdas();
    CHECK(max_diff(cv_to_lambdas<double>(lambdas_to_cv(l2)), l2) == 0);

    CHECK_THROWS_AS(lambdas_to_cv(SystemSpec::from_form(GForm::colin_ohta(2, 0.5))), ValidationError);
}

TEST_CASE("lambdas <-> (C, V) round trip is exact on integer systems") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> U(-9, 9);
    for (int k = 0; k < 100; ++k) {
        LambdasT<Rational> l;
        for (auto& x : l) x = U(rng);
        CHECK(cv_to_lambdas(lambdas_to_cv(l)) == l);
        MatrixVectorFormT<Rational> mv;
        for (auto& row : mv.C)
            for (auto& x : row) x = U(rng);
        for (auto& x : mv.vvec) x = U(rng);
        const auto back = lambdas_to_cv(cv_to_lambdas(mv));
        CHECK(back.C == mv.C);
        CHECK(back.vvec == mv.vvec);
    }
}

TEST_CASE("energy criterion") {
    for (const auto& g : sample_forms()) {
        if (!g.lambdas()) continue;
        CHECK(energy_criterion(lambdas_to_cv(*g.lambdas()), 1, 0, 1));
        CHECK(energy_criterion(lambdas_to_cv(*g.lambdas()), 3, 0, 3));  // positive scaling
    }
    CHECK(energy_criterion(lambdas_to_cv(Lambdas{}), 2, 0.5, 1));
    Lambdas l7{};
    l7[6] = 1;
    CHECK_FALSE(energy_criterion(lambdas_to_cv(l7), 1, 0, 1));
    CHECK_THROWS_AS(energy_criterion(lambdas_to_cv(Lambdas{}), 1, 1, 1), ValidationError);

    // exact path
    MatrixVectorFormT<Rational> mv = lambdas_to_cv(nls3_rational(Rational(3, 5), Rational(4, 5), -2));
    CHECK(energy_criterion(mv, 1, 0, 1));

    CHECK(admissible_abc(lambdas_to_cv(*GForm::nls3(0.8, 0.6, 0).lambdas())).has_value());
    CHECK_FALSE(admissible_abc(lambdas_to_cv(l7)).has_value());
}

TEST_CASE("transform_system") {
    const SystemSpec s = SystemSpec::from_form(GForm::nls3(0.8, 0.6, -2));
    const Mat2 I{{{1, 0}, {0, 1}}};
    CHECK(max_diff(*transform_system(s, I).lambdas, *s.lambdas) == 0);

    // 45-degree rotation flips the sign of alpha2
    const double h = 1 / std::sqrt(2.0);
    const Mat2 R{{{h, -h}, {h, h}}};
    const Lambdas rot = *transform_system(s, R).lambdas;
    CHECK(max_diff(rot, nls5_lambdas(0.8, -0.6, 0, -2, 0)) <= 1e-12);

    // same thing in exact arithmetic with the unnormalized matrix (lambdas scale by 1/2)
    const Mat2Q Rq{{{1, -1}, {1, 1}}};
    auto lq = transform_lambdas(nls3_rational(Rational(3, 5), Rational(4, 5), -2), Rq);
    for (auto& x : lq) x *= 2;
    CHECK(lq == nls3_rational(Rational(3, 5), Rational(-4, 5), -2));

    // complex diagonal case: NLS3(-1, 0, r) -> NLS3(1/2, -1/2, r - 4)
    const double r = 0.7;
    CHECK(max_diff(transform_diag_i(nls5_lambdas(-1, 0, 0, r, 0)), nls5_lambdas(0.5, -0.5, 0, r - 4, 0)) <= 1e-14);

    // inverse round trip
    const Mat2 A{{{1.3, -0.4}, {0.7, 0.9}}};
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    const Mat2 Ai{{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
    const SystemSpec s5 = SystemSpec::from_form(GForm::nls5(0.3, 0.5, std::sqrt(0.66), 0.4, 1.1));
    CHECK(max_diff(*transform_system(transform_system(s5, A), Ai).lambdas, *s5.lambdas) <= 1e-12);

    const Mat2 S{{{1, 2}, {2, 4}}};
    CHECK_THROWS_AS(transform_system(s, S), ValidationError);
}

TEST_CASE("unitary angle") {
    CHECK(unitary_angle({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(unitary_angle({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(kPi / 2));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const CPair z = random_pair(rng), w = random_pair(rng);
        // a random unitary: rotation composed with phases
        const double t = 0.3 * k, a = 0.11 * k, b = -0.7 * k;
        auto U = [&](const CPair& x) {
            const cplx y0 = std::cos(t) * x[0] - std::sin(t) * x[1];
            const cplx y1 = std::sin(t) * x[0] + std::cos(t) * x[1];
            return CPair{std::polar(1.0, a) * y0, std::polar(1.0, b) * y1};
        };
        const double ang = unitary_angle(z, w);
        CHECK(ang >= 0);
        CHECK(ang <= kPi / 2 + 1e-15);
        CHECK(unitary_angle(U(z), U(w)) == doctest::Approx(ang).epsilon(1e-12));
    }
    CHECK_THROWS_AS(unitary_angle({0.0, 0.0}, {1.0, 0.0}), ValidationError);
}

TEST_CASE("standard form constraints and system validation") {
    CHECK(GForm::nls1(1, -1).constraint_violations().empty());
    CHECK_FALSE(GForm::nls1(0.5, 0).constraint_violations().empty());
    CHECK_FALSE(GForm::nls4(0.1, 0.2, 0.97, 1).constraint_violations().empty());
    CHECK_FALSE(GForm::nls5(0.3, 0.5, std::sqrt(0.66), 0.4, 4.0).constraint_violations().empty());
    for (const auto& g : sample_forms()) CHECK(g.constraint_violations().empty());
    SystemSpec s = SystemSpec::from_form(GForm::nls1(-1, -1), 3);
    CHECK_NOTHROW(s.validate());
    s.d = 4;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.d = 1;
    s.n = {0, 1};
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("from_lambdas reproduces the form's coefficients") {
    for (const auto& g : sample_forms()) {
        if (!g.lambdas()) continue;
        const GForm h = GForm::from_lambdas(*g.lambdas());
        std::mt19937_64 rng(9);
        for (int k = 0; k < 20; ++k) {
            const CPair z = random_pair(rng);
            CHECK(h(z) == doctest::Approx(g(z)).epsilon(1e-12));
        }
    }
}
