#include "nlss/system_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace nlss {

std::string to_string(FormTag t) {
    switch (t) {
        case FormTag::NLS1: return "NLS1";
        case FormTag::NLS2: return "NLS2";
        case FormTag::NLS3: return "NLS3";
        case FormTag::NLS4: return "NLS4";
        case FormTag::NLS5: return "NLS5";
        case FormTag::CO: return "CO";
        case FormTag::Custom: return "Custom";
    }
    return "Custom";
}

FormTag form_tag_from_string(const std::string& s) {
    for (auto t : {FormTag::NLS1, FormTag::NLS2, FormTag::NLS3, FormTag::NLS4, FormTag::NLS5,
                   FormTag::CO, FormTag::Custom})
        if (to_string(t) == s) return t;
    throw ValidationError("unknown standard form '" + s + "'");
}

Lambdas nls1_lambdas(double alpha, double beta) {
    Lambdas l{};
    l[0] = alpha;
    l[11] = beta;
    return l;
}

Lambdas nls2_lambdas(double alpha, double beta, double sigma) {
    Lambdas l{};
    l[0] = alpha + sigma;
    l[3] = sigma;
    l[7] = sigma;
    l[11] = beta + sigma;
    return l;
}

Lambdas nls5_lambdas(double a1, double a2, double a3, double r, double eta) {
    const double c = a3 * std::cos(eta), s = a3 * std::sin(eta);
    return {3 * a1 + a2 + 2 * c + r, 2 * s,  s, 2 * (a1 - a2) + r, a1 - a2, s,
            s,                       2 * (a1 - a2) + r, a1 - a2, 2 * s, s, 3 * a1 + a2 - 2 * c + r};
}

CPair lambda_F(const Lambdas& l, const CPair& z) {
    const cplx u1 = z[0], u2 = z[1];
    const double a1 = std::norm(u1), a2 = std::norm(u2);
    const cplx m[6] = {a1 * u1, a1 * u2, u1 * u1 * std::conj(u2), a2 * u1, u2 * u2 * std::conj(u1), a2 * u2};
    cplx f1 = 0, f2 = 0;
    for (int k = 0; k < 6; ++k) {
        f1 += l[k] * m[k];
        f2 += l[6 + k] * m[k];
    }
    return {f1, f2};
}

CPair numeric_wirtinger(const GForm::Fn& g, double p, const CPair& z, double h) {
    CPair out{};
    for (int j = 0; j < 2; ++j) {
        double d[2];
        for (int part = 0; part < 2; ++part) {
            const cplx e = part == 0 ? cplx(h, 0) : cplx(0, h);
            auto at = [&](double k) {
                CPair w = z;
                w[j] += k * e;
                return g(w);
            };
            d[part] = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
        }
        // d/dzbar = (d/dx + i d/dy)/2
        out[j] = (2.0 / p) * 0.5 * cplx(d[0], d[1]);
    }
    return out;
}

namespace {

double nls_closed(const FormParams& q, FormTag tag, const CPair& z) {
    const cplx u1 = z[0], u2 = z[1];
    const double P = std::norm(u1), R = std::norm(u2), S = P + R;
    switch (tag) {
        case FormTag::NLS1: return q.alpha * P * P + q.beta * R * R;
        case FormTag::NLS2: return q.alpha * P * P + q.beta * R * R + q.sigma * S * S;
        default: break;
    }
    const double base = q.alpha1 * std::norm(u1 * u1 + u2 * u2) + q.alpha2 * std::norm(u1 * u1 - u2 * u2) -
                        4 * q.alpha2 * P * R + (2 * q.alpha1 + q.r) * S * S;
    if (tag == FormTag::NLS3) return base;
    if (tag == FormTag::NLS4) return base + 2 * q.alpha3 * (P * P - R * R);
    return base + 2 * q.alpha3 * std::cos(q.eta) * (P * P - R * R) +
           4 * q.alpha3 * std::sin(q.eta) * S * std::real(std::conj(u1) * u2);
}

}  // namespace

GForm GForm::nls1(double alpha, double beta) {
    GForm g;
    g.tag_ = FormTag::NLS1;
    g.par_.alpha = alpha;
    g.par_.beta = beta;
    g.lam_ = nls1_lambdas(alpha, beta);
    return g;
}

GForm GForm::nls2(double alpha, double beta, double sigma) {
    GForm g;
    g.tag_ = FormTag::NLS2;
    g.par_.alpha = alpha;
    g.par_.beta = beta;
    g.par_.sigma = sigma;
    g.lam_ = nls2_lambdas(alpha, beta, sigma);
    return g;
}

GForm GForm::nls3(double a1, double a2, double r) {
    GForm g;
    g.tag_ = FormTag::NLS3;
    g.par_.alpha1 = a1;
    g.par_.alpha2 = a2;
    g.par_.r = r;
    g.lam_ = nls5_lambdas(a1, a2, 0, r, 0);
    return g;
}

GForm GForm::nls4(double a1, double a2, double a3, double r) {
    GForm g;
    g.tag_ = FormTag::NLS4;
    g.par_.alpha1 = a1;
    g.par_.alpha2 = a2;
    g.par_.alpha3 = a3;
    g.par_.r = r;
    g.lam_ = nls5_lambdas(a1, a2, a3, r, 0);
    return g;
}

GForm GForm::nls5(double a1, double a2, double a3, double r, double eta) {
    GForm g;
    g.tag_ = FormTag::NLS5;
    g.par_.alpha1 = a1;
    g.par_.alpha2 = a2;
    g.par_.alpha3 = a3;
    g.par_.r = r;
    g.par_.eta = eta;
    g.lam_ = nls5_lambdas(a1, a2, a3, r, eta);
    return g;
}

GForm GForm::colin_ohta(double kappa, double gamma) {
    GForm g;
    g.tag_ = FormTag::CO;
    g.par_.kappa = kappa;
    g.par_.gamma = gamma;
    g.p_ = 3;
    g.n_ = {1, 2};
    return g;
}

GForm GForm::custom(double p, std::array<int, 2> n, Fn fn) {
    if (!(p > 2)) throw ValidationError("custom g: degree must exceed 2");
    if (n[0] <= 0 || n[1] <= 0) throw ValidationError("gauge vector must be positive");
    GForm g;
    g.tag_ = FormTag::Custom;
    g.p_ = p;
    g.n_ = n;
    g.custom_ = std::move(fn);
    return g;
}

GForm GForm::from_lambdas(const Lambdas& l) {
    GForm g;
    g.tag_ = FormTag::Custom;
    g.lam_ = l;
    g.custom_ = [l](const CPair& z) {
        const CPair f = lambda_F(l, z);
        return std::real(f[0] * std::conj(z[0]) + f[1] * std::conj(z[1]));
    };
    return g;
}

double GForm::operator()(const CPair& z) const {
    switch (tag_) {
        case FormTag::CO: {
            const double a = std::abs(z[0]), b = std::abs(z[1]);
            return -par_.kappa * a * a * a - b * b * b -
                   1.5 * par_.gamma * std::real(std::conj(z[0]) * std::conj(z[0]) * z[1]);
        }
        case FormTag::Custom: return custom_(z);
        default: return nls_closed(par_, tag_, z);
    }
}

CPair GForm::wirtinger(const CPair& z) const {
    if (lam_) return lambda_F(*lam_, z);
    if (tag_ == FormTag::CO) {
        const cplx z1 = z[0], z2 = z[1];
        return {-par_.kappa * std::abs(z1) * z1 - par_.gamma * std::conj(z1) * z2,
                -std::abs(z2) * z2 - 0.5 * par_.gamma * z1 * z1};
    }
    // step tuned for 4th-order differences of O(1) polynomials
    const double scale = std::sqrt(norm2(z));
    return numeric_wirtinger(custom_, p_, z, 1e-3 * std::max(scale, 1e-3));
}

double GForm::h(double nu, double zeta) const {
    return (*this)(CPair{cplx(std::cos(nu), 0), std::polar(std::sin(nu), zeta)});
}

std::string GForm::name() const {
    std::ostringstream os;
    os.precision(6);
    os << to_string(tag_) << "(";
    switch (tag_) {
        case FormTag::NLS1: os << "alpha=" << par_.alpha << ",beta=" << par_.beta; break;
        case FormTag::NLS2: os << "alpha=" << par_.alpha << ",beta=" << par_.beta << ",sigma=" << par_.sigma; break;
        case FormTag::NLS3: os << "alpha1=" << par_.alpha1 << ",alpha2=" << par_.alpha2 << ",r=" << par_.r; break;
        case FormTag::NLS4:
            os << "alpha1=" << par_.alpha1 << ",alpha2=" << par_.alpha2 << ",alpha3=" << par_.alpha3 << ",r=" << par_.r;
            break;
        case FormTag::NLS5:
            os << "alpha1=" << par_.alpha1 << ",alpha2=" << par_.alpha2 << ",alpha3=" << par_.alpha3 << ",r=" << par_.r
               << ",eta=" << par_.eta;
            break;
        case FormTag::CO: os << "kappa=" << par_.kappa << ",gamma=" << par_.gamma; break;
        case FormTag::Custom: os << "p=" << p_; break;
    }
    os << ")";
    return os.str();
}

std::vector<std::string> GForm::constraint_violations(double tol) const {
    std::vector<std::string> v;
    const auto& q = par_;
    auto unit = [&](double s) {
        if (std::abs(s - 1) > tol) v.push_back("alpha coefficients must have unit Euclidean norm");
    };
    auto in01 = [&](double x, const char* nm) {
        if (x != -1 && x != 0 && x != 1) v.push_back(std::string(nm) + " must be in {-1,0,1}");
    };
    switch (tag_) {
        case FormTag::NLS1:
            in01(q.alpha, "alpha");
            in01(q.beta, "beta");
            if (q.alpha < q.beta) v.push_back("alpha >= beta required");
            break;
        case FormTag::NLS2:
            if (q.alpha < q.beta) v.push_back("alpha >= beta required");
            if (std::abs(q.sigma) != 1) v.push_back("sigma must be +1 or -1");
            break;
        case FormTag::NLS3:
            if (q.alpha2 < 0) v.push_back("alpha2 >= 0 required");
            if (std::abs(q.alpha1 * q.alpha1 - q.alpha2 * q.alpha2) <= tol) v.push_back("alpha1^2 != alpha2^2 required");
            unit(q.alpha1 * q.alpha1 + q.alpha2 * q.alpha2);
            break;
        case FormTag::NLS4:
            if (q.alpha2 < 0) v.push_back("alpha2 >= 0 required");
            if (!(q.alpha3 > 0)) v.push_back("alpha3 > 0 required");
            if (std::abs(q.alpha1 - q.alpha2) <= tol) v.push_back("alpha1 != alpha2 required");
            unit(q.alpha1 * q.alpha1 + q.alpha2 * q.alpha2 + q.alpha3 * q.alpha3);
            break;
        case FormTag::NLS5:
            if (!(q.alpha2 > 0)) v.push_back("alpha2 > 0 required");
            if (!(q.alpha3 > 0)) v.push_back("alpha3 > 0 required");
            if (!(q.eta > 0 && q.eta < kPi)) v.push_back("eta in (0,pi) required");
            if (q.eta > kPi / 2 && !(q.alpha1 > 0)) v.push_back("alpha1 > 0 required when eta > pi/2");
            unit(q.alpha1 * q.alpha1 + q.alpha2 * q.alpha2 + q.alpha3 * q.alpha3);
            break;
        case FormTag::CO:
            if (!(q.gamma > 0)) v.push_back("gamma > 0 required");
            break;
        case FormTag::Custom: break;
    }
    return v;
}

SystemSpec SystemSpec::from_lambdas(const Lambdas& l, int d) {
    SystemSpec s;
    s.lambdas = l;
    s.d = d;
    return s;
}

SystemSpec SystemSpec::from_form(const GForm& g, int d) {
    SystemSpec s;
    s.gform = g;
    s.lambdas = g.lambdas();
    s.p = g.degree();
    s.n = g.gauge();
    s.d = d;
    return s;
}

GForm SystemSpec::nonlinearity() const {
    if (gform) return *gform;
    if (lambdas) return GForm::from_lambdas(*lambdas);
    throw ValidationError("system has neither a g-form nor coefficients");
}

void SystemSpec::validate() const {
    if (d < 1 || d > 3) throw ValidationError("d must be 1, 2 or 3");
    if (!(p > 2)) throw ValidationError("p must exceed 2");
    if (d == 3 && !(p < 6)) throw ValidationError("p must be below 2* = 6 for d = 3");
    if (n[0] <= 0 || n[1] <= 0) throw ValidationError("gauge vector must be positive integers");
    if (lambdas && p != 4) throw ValidationError("coefficient form requires p = 4");
    if (!lambdas && !gform) throw ValidationError("system has neither a g-form nor coefficients");
}

double eval_g(const GForm& g, const CPair& z) { return g(z); }

CPair eval_F(const SystemSpec& s, const CPair& z) {
    if (s.lambdas) return lambda_F(*s.lambdas, z);
    return s.nonlinearity().wirtinger(z);
}

MatrixVectorForm lambdas_to_cv(const SystemSpec& s) {
    if (s.p != 4 || !s.lambdas) throw ValidationError("(C,V) form needs a cubic (p = 4) coefficient system");
    return lambdas_to_cv(*s.lambdas);
}

SystemSpec cv_to_lambdas(const MatrixVectorForm& mv, int d) { return SystemSpec::from_lambdas(cv_to_lambdas<double>(mv), d); }

bool energy_criterion(const MatrixVectorForm& mv, double a, double b, double c, double tol) {
    if (!(b * b - a * c < 0)) throw ValidationError("(a,b,c) must satisfy b^2 - ac < 0");
    const auto rows = criterion_matrix(mv);
    double scale = 0;
    for (const auto& r : rows)
        for (double x : r) scale = std::max(scale, std::abs(x));
    const double nv = std::max({std::abs(a), std::abs(b), std::abs(c)});
    for (const auto& r : rows)
        if (std::abs(r[0] * a + r[1] * b + r[2] * c) > tol * std::max(1.0, scale) * nv) return false;
    return true;
}

bool energy_criterion(const MatrixVectorFormT<Rational>& mv, const Rational& a, const Rational& b, const Rational& c) {
    if (!(b * b - a * c < 0)) throw ValidationError("(a,b,c) must satisfy b^2 - ac < 0");
    for (const auto& r : criterion_matrix(mv))
        if (r[0] * a + r[1] * b + r[2] * c != 0) return false;
    return true;
}

std::optional<std::array<double, 3>> admissible_abc(const MatrixVectorForm& mv, double tol) {
    const auto rows = criterion_matrix(mv);
    Eigen::Matrix<double, 6, 3> A;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = rows[i][j];
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(A, Eigen::ComputeFullV);
    const auto sv = svd.singularValues();
    const double smax = std::max(sv(0), 1.0);
    std::vector<Eigen::Vector3d> basis;
    for (int k = 0; k < 3; ++k)
        if (sv(k) <= tol * smax) basis.push_back(svd.matrixV().col(k));
    if (basis.empty()) return std::nullopt;
    // quadratic form q(x) = b^2 - ac as a symmetric matrix
    Eigen::Matrix3d Q;
    Q << 0, 0, -0.5, 0, 1, 0, -0.5, 0, 0;
    const int k = static_cast<int>(basis.size());
    Eigen::MatrixXd B(3, k);
    for (int i = 0; i < k; ++i) B.col(i) = basis[i];
    Eigen::MatrixXd R = B.transpose() * Q * B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    if (es.eigenvalues()(0) >= -tol) return std::nullopt;
    Eigen::Vector3d x = B * es.eigenvectors().col(0);
    if (x(0) < 0) x = -x;  // a > 0 convention
    x /= x.cwiseAbs().maxCoeff();
    return std::array<double, 3>{x(0), x(1), x(2)};
}

namespace {

// monomial k of an equation as (a, b, c) in u_a u_b conj(u_c)
constexpr int kMono[6][3] = {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 1, 1}};

template <class T, class M>
LambdasT<T> push_forward(const LambdasT<T>& l, const M& Mm, const M& K, const M& Kbar) {
    // tensor T_j[a][b][c], symmetric in (a,b)
    T t[2][2][2][2] = {};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 6; ++k) {
            const auto [a, b, c] = std::tuple{kMono[k][0], kMono[k][1], kMono[k][2]};
            const T& v = l[6 * j + k];
            if (a == b) {
                t[j][a][b][c] += v;
            } else {
                t[j][a][b][c] += v / T(2);
                t[j][b][a][c] += v / T(2);
            }
        }
    T out[2][2][2][2] = {};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c) {
                        if (t[j][a][b][c] == T(0)) continue;
                        const T w = Mm[i][j] * t[j][a][b][c];
                        for (int al = 0; al < 2; ++al)
                            for (int be = 0; be < 2; ++be)
                                for (int ga = 0; ga < 2; ++ga)
                                    out[i][al][be][ga] += w * K[a][al] * K[b][be] * Kbar[c][ga];
                    }
    LambdasT<T> r{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 6; ++k) {
            const auto [a, b, c] = std::tuple{kMono[k][0], kMono[k][1], kMono[k][2]};
            r[6 * i + k] = a == b ? out[i][a][b][c] : out[i][a][b][c] + out[i][b][a][c];
        }
    return r;
}

template <class T>
std::array<std::array<T, 2>, 2> inverse2(const std::array<std::array<T, 2>, 2>& M) {
    const T det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (det == T(0)) throw ValidationError("transform matrix is singular");
    return {{{M[1][1] / det, -M[0][1] / det}, {-M[1][0] / det, M[0][0] / det}}};
}

}  // namespace

Lambdas transform_lambdas(const Lambdas& l, const Mat2& M) {
    const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    const double sc = std::max({std::abs(M[0][0]), std::abs(M[0][1]), std::abs(M[1][0]), std::abs(M[1][1])});
    if (std::abs(det) <= 1e-14 * sc * sc) throw ValidationError("transform matrix is singular");
    const Mat2 K = inverse2(M);
    return push_forward(l, M, K, K);
}

LambdasT<Rational> transform_lambdas(const LambdasT<Rational>& l, const Mat2Q& M) {
    const Mat2Q K = inverse2(M);
    return push_forward(l, M, K, K);
}

SystemSpec transform_system(const SystemSpec& s, const Mat2& M) {
    if (!s.lambdas || s.p != 4) throw ValidationError("transform_system needs a cubic coefficient system");
    SystemSpec out = s;
    out.gform.reset();
    out.lambdas = transform_lambdas(*s.lambdas, M);
    return out;
}

Lambdas transform_diag_i(const Lambdas& l, double tol) {
    using C2 = std::array<std::array<cplx, 2>, 2>;
    const cplx I(0, 1);
    const C2 D{{{1, 0}, {0, I}}};
    const C2 K{{{1, 0}, {0, -I}}};
    const C2 Kbar{{{1, 0}, {0, I}}};
    LambdasT<cplx> lc;
    for (int k = 0; k < 12; ++k) lc[k] = l[k];
    const auto r = push_forward(lc, D, K, Kbar);
    Lambdas out{};
    for (int k = 0; k < 12; ++k) {
        if (std::abs(r[k].imag()) > tol * (1 + std::abs(r[k].real())))
            throw ValidationError("diag(1,i) image has complex coefficients");
        out[k] = r[k].real();
    }
    return out;
}

double unitary_angle(const CPair& z, const CPair& w) {
    const double nz = std::sqrt(norm2(z)), nw = std::sqrt(norm2(w));
    if (nz == 0 || nw == 0) throw ValidationError("unitary_angle: zero vector");
    const cplx ip = std::conj(z[0]) * w[0] + std::conj(z[1]) * w[1];
    return std::acos(std::min(1.0, std::abs(ip) / (nz * nw)));
}

}  // namespace nlss
