#include "nlss/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "nlss/sphere_critical.hpp"
#include "optim.hpp"

namespace nlss {

namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// (a,b,c) with b^2 - ac < 0 inside span(K), normalized with a > 0
std::optional<Vec3> coercive_in(const MatrixXd& K, double tol) {
    if (K.cols() == 0) return std::nullopt;
    Matrix3d S = Matrix3d::Zero();  // x^T S x = b^2 - ac
    S(1, 1) = 1;
    S(0, 2) = S(2, 0) = -0.5;
    const MatrixXd R = K.transpose() * S * K;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(R);
    if (!(es.eigenvalues()(0) < -tol)) return std::nullopt;
    Eigen::Vector3d v = K * es.eigenvectors().col(0);
    v.normalize();
    if (v(0) < 0) v = -v;
    return Vec3{v(0), v(1), v(2)};
}

MatrixXd null_space(const MatrixXd& A, double tol, int* rank) {
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    if (rank) *rank = r;
    return svd.matrixV().rightCols(A.cols() - r);
}

std::vector<Vec3> columns(const MatrixXd& K) {
    std::vector<Vec3> out;
    for (int j = 0; j < K.cols(); ++j) out.push_back({K(0, j), K(1, j), K(2, j)});
    return out;
}

}  // namespace

RankKernel rank_and_kernel(const Mat3& C, double tol) {
    MatrixXd A(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = C[i][j];
    RankKernel rk;
    const MatrixXd K = null_space(A, tol, &rk.rank);
    rk.kernel = columns(K);
    rk.coercive = coercive_in(K, tol);
    return rk;
}

RankKernel rank_and_kernel(const MatrixVectorForm& mv, double tol) {
    RankKernel rk = rank_and_kernel(mv.C, tol);
    const auto rows = criterion_matrix(mv);
    MatrixXd A(6, 3);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = rows[i][j];
    const MatrixXd K = null_space(A, tol, nullptr);
    rk.criterion_kernel = columns(K);
    rk.admissible = coercive_in(K, tol);
    return rk;
}

GForm standard_form(FormTag tag, const FormParams& q) {
    switch (tag) {
        case FormTag::NLS1: return GForm::nls1(q.alpha, q.beta);
        case FormTag::NLS2: return GForm::nls2(q.alpha, q.beta, q.sigma);
        case FormTag::NLS3: return GForm::nls3(q.alpha1, q.alpha2, q.r);
        case FormTag::NLS4: return GForm::nls4(q.alpha1, q.alpha2, q.alpha3, q.r);
        case FormTag::NLS5: return GForm::nls5(q.alpha1, q.alpha2, q.alpha3, q.r, q.eta);
        case FormTag::CO: return GForm::colin_ohta(q.kappa, q.gamma);
        case FormTag::Custom: break;
    }
    throw ValidationError("no standard form for this tag");
}

namespace {

// The NLS1-NLS5 lambda vectors fill a 5-dim subspace, linear in y = (a1, a2, a3 cos eta, a3 sin eta, r).
// Each tag lives on a linear subspace of it (NLS1 c {s=0, a1=a2, r=0}, NLS2 c {s=0, a1=a2}, NLS3 c {s=c=0}, NLS4 c {s=0}).
struct Family {
    MatrixXd B;                  // 12 x 5, columns = lambdas of unit coordinates
    std::array<MatrixXd, 5> Q;   // orthonormal bases per tag, index = tag
    Family() : B(12, 5) {
        for (int k = 0; k < 5; ++k) {
            Lambdas l{};
            if (k == 0) l = nls5_lambdas(1, 0, 0, 0, 0);
            else if (k == 1) l = nls5_lambdas(0, 1, 0, 0, 0);
            else if (k == 2) l = nls5_lambdas(0, 0, 1, 0, 0);
            else if (k == 3) l = nls5_lambdas(0, 0, 1, 0, kPi / 2);
            else l = nls5_lambdas(0, 0, 0, 1, 0);
            for (int i = 0; i < 12; ++i) B(i, k) = std::abs(l[i]) < 1e-15 ? 0.0 : l[i];
        }
        auto sub = [&](std::initializer_list<std::array<double, 5>> cols) {
            MatrixXd Y(5, cols.size());
            int j = 0;
            for (const auto& c : cols) {
                for (int i = 0; i < 5; ++i) Y(i, j) = c[i];
                ++j;
            }
            const MatrixXd A = B * Y;
            Eigen::HouseholderQR<MatrixXd> qr(A);
            return MatrixXd(qr.householderQ() * MatrixXd::Identity(12, A.cols()));
        };
        Q[0] = sub({{1, 1, 0, 0, 0}, {0, 0, 1, 0, 0}});
        Q[1] = sub({{1, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, 1}});
        Q[2] = sub({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 0, 1}});
        Q[3] = sub({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, 1}});
        Q[4] = sub({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
    }
    double rel_distance(const Lambdas& l, int tag = 4) const {
        VectorXd v(12);
        for (int i = 0; i < 12; ++i) v(i) = l[i];
        const double n = v.norm();
        if (n == 0) return 0;
        return (v - Q[tag] * (Q[tag].transpose() * v)).norm() / n;
    }
    // least-squares coordinates (a1, a2, c, s, r)
    std::array<double, 5> coords(const Lambdas& l) const {
        VectorXd v(12);
        for (int i = 0; i < 12; ++i) v(i) = l[i];
        const VectorXd y = B.colPivHouseholderQr().solve(v);
        return {y(0), y(1), y(2), y(3), y(4)};
    }
};

const Family& family() {
    static const Family f;
    return f;
}

bool near_int(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

double lnorm(const Lambdas& l) {
    double s = 0;
    for (double x : l) s += x * x;
    return std::sqrt(s);
}

Mat2 mul(const Mat2& A, const Mat2& B) {
    Mat2 C{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
    return C;
}

Mat2 rot(double a) { return {{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}}; }

}  // namespace

std::optional<FormParams> interpret_as(FormTag tag, const Lambdas& l, double* scale, double tol) {
    const auto& fam = family();
    const double n = lnorm(l);
    if (fam.rel_distance(l) > tol) return std::nullopt;
    auto [a1, a2, c, s, r] = fam.coords(l);
    const double t = tol * std::max(n, 1e-300);
    auto zero = [&](double x) { return std::abs(x) <= t; };
    FormParams q;
    double k = 1;
    switch (tag) {
        case FormTag::NLS1: {
            if (!zero(s) || !zero(a1 - a2) || !zero(r)) return std::nullopt;
            const double l0 = 4 * a1 + 2 * c, l11 = 4 * a1 - 2 * c;
            const double m = std::max(std::abs(l0), std::abs(l11));
            k = m > t ? 1 / m : 1.0;
            q.alpha = k * l0;
            q.beta = k * l11;
            if (!near_int(q.alpha, tol) || !near_int(q.beta, tol)) return std::nullopt;
            q.alpha = std::round(q.alpha), q.beta = std::round(q.beta);
            break;
        }
        case FormTag::NLS2: {
            if (!zero(s) || !zero(a1 - a2) || zero(r)) return std::nullopt;
            k = 1 / std::abs(r);
            q.sigma = r > 0 ? 1 : -1;
            q.alpha = k * (4 * a1 + 2 * c);
            q.beta = k * (4 * a1 - 2 * c);
            break;
        }
        case FormTag::NLS3: {
            if (!zero(s) || !zero(c)) return std::nullopt;
            const double m = std::hypot(a1, a2);
            if (m <= t) return std::nullopt;
            k = 1 / m;
            q.alpha1 = k * a1, q.alpha2 = k * a2, q.r = k * r;
            break;
        }
        case FormTag::NLS4: {
            if (!zero(s) || !(c > t)) return std::nullopt;
            k = 1 / std::sqrt(a1 * a1 + a2 * a2 + c * c);
            q.alpha1 = k * a1, q.alpha2 = k * a2, q.alpha3 = k * c, q.r = k * r;
            break;
        }
        case FormTag::NLS5: {
            if (!(s > t)) return std::nullopt;
            const double a3 = std::hypot(c, s);
            k = 1 / std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
            q.alpha1 = k * a1, q.alpha2 = k * a2, q.alpha3 = k * a3, q.r = k * r, q.eta = std::atan2(s, c);
            break;
        }
        default: return std::nullopt;
    }
    const GForm g = standard_form(tag, q);
    if (!g.constraint_violations(tol).empty()) return std::nullopt;
    // round trip against the form's own coefficients
    Lambdas diff{};
    for (int i = 0; i < 12; ++i) diff[i] = k * l[i] - (*g.lambdas())[i];
    if (lnorm(diff) > 10 * tol * std::max(1.0, lnorm(*g.lambdas()))) return std::nullopt;
    if (scale) *scale = k;
    return q;
}

std::optional<Match> match_standard_form(const SystemSpec& spec, const SearchBudget& budget) {
    if (!spec.lambdas) throw ValidationError("matching needs a cubic coefficient vector");
    const Lambdas l0 = *spec.lambdas;
    if (!admissible_abc(lambdas_to_cv(l0))) throw ValidationError("energy criterion fails: system is not in the class");
    const auto& fam = family();
    const double s2 = std::sqrt(0.5);
    const Mat2 I{{{1, 0}, {0, 1}}}, W{{{0, 1}, {1, 0}}}, Z{{{1, 0}, {0, -1}}}, R45{{{s2, -s2}, {s2, s2}}};
    std::vector<Mat2> discrete;
    for (const Mat2& a : {I, R45})
        for (const Mat2& b : {I, W})
            for (const Mat2& c : {I, Z}) discrete.push_back(mul(a, mul(b, c)));
    const FormTag tags[] = {FormTag::NLS1, FormTag::NLS2, FormTag::NLS3, FormTag::NLS4, FormTag::NLS5};

    std::vector<Match> found;
    auto try_tag = [&](const Mat2& M, FormTag tag) {
        for (const auto& D : discrete) {
            Mat2 DM = mul(D, M);
            Lambdas ld = transform_lambdas(l0, DM);
            if (tag == FormTag::NLS1) {
                // decoupled components: each diagonal coefficient can be scaled to +-1 on its own
                auto sc = [](double x) { return std::abs(x) > 1e-300 ? std::sqrt(std::abs(x)) : 1.0; };
                DM = mul(Mat2{{{sc(ld[0]), 0}, {0, sc(ld[11])}}}, DM);
                ld = transform_lambdas(l0, DM);
            }
            double k = 1;
            const auto q = interpret_as(tag, ld, &k, 1e-7);
            if (!q) continue;
            // u -> u / sqrt(k) multiplies lambdas by k
            Mat2 Mt = DM;
            for (auto& row : Mt)
                for (auto& x : row) x /= std::sqrt(k);
            const Lambdas target = *standard_form(tag, *q).lambdas();
            const Lambdas got = transform_lambdas(l0, Mt);
            Lambdas diff{};
            for (int i = 0; i < 12; ++i) diff[i] = got[i] - target[i];
            found.push_back({tag, *q, Mt, lnorm(diff) / std::max(1.0, lnorm(target))});
        }
    };

    // the identity first: a system already in standard form matches itself
    for (FormTag tag : tags) {
        double k = 1;
        if (const auto q = interpret_as(tag, l0, &k, 1e-10); q && std::abs(k - 1) < 1e-10)
            return Match{tag, *q, I, 0.0};
    }

    auto build = [](const std::vector<double>& x) {
        const Mat2 Dg{{{std::exp(x[2] / 2), 0}, {0, std::exp(-x[2] / 2)}}};
        return mul(rot(x[0]), mul(Dg, rot(x[1])));
    };
    struct Cell {
        std::array<double, 5> f;
        std::vector<double> x;
    };
    std::vector<Cell> cells;
    const double rmax = std::log(100.0);
    for (int i = 0; i < budget.grid_angle; ++i)
        for (int j = 0; j < budget.grid_angle; ++j)
            for (int k = 0; k < budget.grid_ratio; ++k) {
                std::vector<double> x{kPi * i / budget.grid_angle, kPi * j / budget.grid_angle,
                                      -rmax + 2 * rmax * k / std::max(1, budget.grid_ratio - 1)};
                const Lambdas lx = transform_lambdas(l0, build(x));
                Cell c{{}, x};
                for (int t = 0; t < 5; ++t) c.f[t] = fam.rel_distance(lx, t);
                cells.push_back(std::move(c));
            }
    auto key = [](const Match& m) {
        const auto& q = m.params;
        auto rd = [](double x) { return std::round(x * 1e6) / 1e6; };
        return std::make_tuple(rd(m.residual * 1e6), rd(q.alpha), rd(q.beta), rd(q.sigma), rd(q.alpha1), rd(q.alpha2),
                               rd(q.alpha3), rd(q.r), rd(q.eta));
    };
    // simplest family first: the first tag with a valid match wins
    for (int t = 0; t < 5; ++t) {
        std::stable_sort(cells.begin(), cells.end(), [t](const Cell& a, const Cell& b) { return a.f[t] < b.f[t]; });
        auto objective = [&](const std::vector<double>& x) {
            return fam.rel_distance(transform_lambdas(l0, build(x)), t);
        };
        found.clear();
        const int nref = std::min<int>(budget.refine, static_cast<int>(cells.size()));
        for (int c = 0; c < nref; ++c) {
            if (cells[c].f[t] > 0.5) break;
            auto r = detail::nelder_mead(objective, cells[c].x, 0.1, 1e-15, 0.0, 6000);
            // restart from the refined point to shake off a collapsed simplex
            r = detail::nelder_mead(objective, r.x, 1e-3, 1e-16, 0.0, 6000);
            if (r.f < 1e-6) try_tag(build(r.x), tags[t]);
        }
        std::vector<Match> ok;
        for (auto& m : found)
            if (m.residual <= budget.tol) ok.push_back(m);
        if (!ok.empty())
            return *std::min_element(ok.begin(), ok.end(), [&](const Match& a, const Match& b) { return key(a) < key(b); });
    }
    return std::nullopt;
}

StructureSignature structure_signature(const GForm& g) {
    StructureSignature s;
    std::vector<CPair> gens;
    if (g.tag() != FormTag::Custom) {
        const auto a = gmin_analytic(g);
        s.g_min = a.g_min;
        for (const auto& set : a.T0)
            for (const auto& w : set.generators) gens.push_back(w);
    } else {
        const auto nm = gmin_numeric(g);
        s.g_min = nm.g_min;
        gens = nm.minimizers;
    }
    s.orbits = static_cast<int>(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) s.angles.push_back(unitary_angle(gens[i], gens[j]));
    std::sort(s.angles.begin(), s.angles.end());
    return s;
}

bool same_structure(const StructureSignature& a, const StructureSignature& b, double tol) {
    if (a.orbits != b.orbits || std::abs(a.g_min - b.g_min) > tol || a.angles.size() != b.angles.size()) return false;
    for (std::size_t i = 0; i < a.angles.size(); ++i)
        if (std::abs(a.angles[i] - b.angles[i]) > tol) return false;
    return true;
}

}  // namespace nlss
