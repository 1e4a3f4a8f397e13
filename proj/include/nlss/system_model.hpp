#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nlss/types.hpp"

namespace nlss {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
using LambdasT = std::array<T, 12>;
using Lambdas = LambdasT<double>;

enum class FormTag { NLS1, NLS2, NLS3, NLS4, NLS5, CO, Custom };

std::string to_string(FormTag t);
FormTag form_tag_from_string(const std::string& s);

struct FormParams {
    double alpha = 0, beta = 0, sigma = 0;
    double alpha1 = 0, alpha2 = 0, alpha3 = 0, r = 0, eta = 0;
    double kappa = 0, gamma = 0;
};

// Real homogeneous nonlinearity g on C^2.
class GForm {
public:
    using Fn = std::function<double(const CPair&)>;

    static GForm nls1(double alpha, double beta);
    static GForm nls2(double alpha, double beta, double sigma);
    static GForm nls3(double alpha1, double alpha2, double r);
    static GForm nls4(double alpha1, double alpha2, double alpha3, double r);
    static GForm nls5(double alpha1, double alpha2, double alpha3, double r, double eta);
    static GForm colin_ohta(double kappa, double gamma);
    static GForm custom(double p, std::array<int, 2> n, Fn g);
    // g(z) = Re sum F_j(z) conj(z_j) with F from the cubic monomials.
    static GForm from_lambdas(const Lambdas& l);

    FormTag tag() const { return tag_; }
    const FormParams& params() const { return par_; }
    double degree() const { return p_; }
    std::array<int, 2> gauge() const { return n_; }

    double operator()(const CPair& z) const;
    // F_j = (2/p) d g / d conj(z_j)
    CPair wirtinger(const CPair& z) const;
    double h(double nu, double zeta) const;

    // Cubic coefficient vector when g is a quartic with known monomial form.
    const std::optional<Lambdas>& lambdas() const { return lam_; }

    std::string name() const;
    // Human-readable list of violated parameter constraints for the tag.
    std::vector<std::string> constraint_violations(double tol = 1e-9) const;

private:
    GForm() = default;
    FormTag tag_ = FormTag::Custom;
    FormParams par_{};
    double p_ = 4;
    std::array<int, 2> n_{1, 1};
    std::optional<Lambdas> lam_;
    Fn custom_;
};

// Lambda vectors of the standard forms.
Lambdas nls1_lambdas(double alpha, double beta);
Lambdas nls2_lambdas(double alpha, double beta, double sigma);
Lambdas nls5_lambdas(double a1, double a2, double a3, double r, double eta);

struct SystemSpec {
    std::optional<Lambdas> lambdas;
    int d = 1;
    double p = 4;
    std::array<int, 2> n{1, 1};
    std::optional<GForm> gform;

    static SystemSpec from_lambdas(const Lambdas& l, int d = 1);
    static SystemSpec from_form(const GForm& g, int d = 1);
    // g from the attached form, or the Euler potential of the lambdas.
    GForm nonlinearity() const;
    void validate() const;
};

double eval_g(const GForm& g, const CPair& z);
CPair eval_F(const SystemSpec& s, const CPair& z);
CPair lambda_F(const Lambdas& l, const CPair& z);
// (2/p) d g / d conj(z_j) by 4th-order central differences on (Re, Im).
CPair numeric_wirtinger(const GForm::Fn& g, double p, const CPair& z, double step = 1e-3);

template <class T>
struct MatrixVectorFormT {
    std::array<std::array<T, 3>, 3> C{};
    std::array<T, 3> vvec{};
};
using MatrixVectorForm = MatrixVectorFormT<double>;

template <class T>
MatrixVectorFormT<T> lambdas_to_cv(const LambdasT<T>& l) {
    MatrixVectorFormT<T> m;
    m.C = {{{l[1] - l[2], -l[0] + l[7] - l[8], -l[6]},
            {l[4], -l[2] + l[10], -l[8]},
            {l[5], -l[3] + l[4] + l[11], -l[9] + l[10]}}};
    m.vvec = {l[7] - 2 * l[8], (-l[1] + 2 * l[2] - l[9] + 2 * l[10]) / 2, l[3] - 2 * l[4]};
    return m;
}

template <class T>
LambdasT<T> cv_to_lambdas(const MatrixVectorFormT<T>& m) {
    const auto& c = m.C;
    const auto& v = m.vvec;
    T half_tr = (c[0][0] + c[1][1] + c[2][2]) / 2;
    return {-(c[0][1] + c[1][2]) + v[0],
            2 * c[0][0] - half_tr + v[1],
            c[0][0] - half_tr + v[1],
            2 * c[1][0] + v[2],
            c[1][0],
            c[2][0],
            -c[0][2],
            -2 * c[1][2] + v[0],
            -c[1][2],
            -2 * c[2][2] + half_tr + v[1],
            -c[2][2] + half_tr + v[1],
            c[1][0] + c[2][1] + v[2]};
}

MatrixVectorForm lambdas_to_cv(const SystemSpec& s);
SystemSpec cv_to_lambdas(const MatrixVectorForm& mv, int d = 1);

// Rows of the 6x3 linear system whose kernel holds the admissible (a,b,c).
template <class T>
std::array<std::array<T, 3>, 6> criterion_matrix(const MatrixVectorFormT<T>& m) {
    const auto& c = m.C;
    const auto& v = m.vvec;
    T tr = c[0][0] + c[1][1] + c[2][2];
    return {{c[0], c[1], c[2],
             {tr - 2 * v[1], 2 * v[0], T(0)},
             {-v[2], tr, v[0]},
             {T(0), -2 * v[2], tr + 2 * v[1]}}};
}

bool energy_criterion(const MatrixVectorForm& mv, double a, double b, double c, double tol = 1e-12);
bool energy_criterion(const MatrixVectorFormT<Rational>& mv, const Rational& a, const Rational& b,
                      const Rational& c);
// Some (a,b,c) with b^2 < ac in the criterion kernel, if one exists.
std::optional<std::array<double, 3>> admissible_abc(const MatrixVectorForm& mv, double tol = 1e-10);

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat2Q = std::array<std::array<Rational, 2>, 2>;

// Coefficients of the system satisfied by v = M u.
SystemSpec transform_system(const SystemSpec& s, const Mat2& M);
LambdasT<Rational> transform_lambdas(const LambdasT<Rational>& l, const Mat2Q& M);
Lambdas transform_lambdas(const Lambdas& l, const Mat2& M);
// v = diag(1, i) u; throws if the result is not real.
Lambdas transform_diag_i(const Lambdas& l, double tol = 1e-12);

double unitary_angle(const CPair& z, const CPair& w);

}  // namespace nlss
