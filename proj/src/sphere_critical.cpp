#include "nlss/sphere_critical.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "optim.hpp"

namespace nlss {

using detail::bisect;
using detail::golden_max;

std::string to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::Point: return "point";
        case OrbitKind::FreePhase: return "free_relative_phase";
        case OrbitKind::RealCircle: return "real_circle";
        case OrbitKind::WholeSphere: return "whole_sphere";
    }
    return "point";
}

CPair SphereChart::point(double nu, double zeta, double theta) {
    return {std::polar(std::cos(nu), theta), std::polar(std::sin(nu), theta + zeta)};
}

CPair canonicalize(const CPair& w0, std::array<int, 2> n) {
    const CPair w = normalized(w0);
    double th = 0;
    if (std::abs(w[0]) > 1e-14) th = -std::arg(w[0]) / n[0];
    else th = -std::arg(w[1]) / n[1];
    CPair out{w[0] * std::polar(1.0, n[0] * th), w[1] * std::polar(1.0, n[1] * th)};
    if (std::abs(out[0]) > 1e-14) out[0] = std::abs(out[0]);
    else out[1] = std::abs(out[1]), out[0] = 0;
    return out;
}

std::pair<double, double> SphereChart::coords(const CPair& w, std::array<int, 2> n) {
    const CPair c = canonicalize(w, n);
    return {std::atan2(std::abs(c[1]), std::real(c[0])), std::abs(c[1]) > 0 ? std::arg(c[1]) : 0.0};
}

namespace {

struct Invariant {
    double x;
    cplx c;
};

Invariant invariant(const CPair& w0, std::array<int, 2> n) {
    const CPair w = normalized(w0);
    cplx c = std::pow(std::conj(w[0]), n[1]) * std::pow(w[1], n[0]);
    if (n[0] == 1 && n[1] == 1) c *= 2.0;
    return {std::norm(w[0]) - std::norm(w[1]), c};
}

}  // namespace

double orbit_distance(const CPair& a, const CPair& b, std::array<int, 2> n) {
    const auto ia = invariant(a, n), ib = invariant(b, n);
    return std::hypot(ia.x - ib.x, std::abs(ia.c - ib.c));
}

double set_distance(const CPair& w, const CriticalSet& s, std::array<int, 2> n) {
    const auto iw = invariant(w, n);
    double best = INFINITY;
    switch (s.kind) {
        case OrbitKind::WholeSphere: return 0.0;
        case OrbitKind::RealCircle: return std::abs(iw.c.imag());
        case OrbitKind::FreePhase:
            for (const auto& g : s.generators) {
                const auto ig = invariant(g, n);
                best = std::min(best, std::hypot(iw.x - ig.x, std::abs(iw.c) - std::abs(ig.c)));
            }
            return best;
        case OrbitKind::Point:
            for (const auto& g : s.generators) best = std::min(best, orbit_distance(w, g, n));
            return best;
    }
    return best;
}

double lagrange_residual(const GForm& g, const CPair& w0) {
    const CPair w = normalized(w0);
    const CPair F = g.wirtinger(w);
    const double v = g(w);
    return std::sqrt(std::norm(F[0] - v * w[0]) + std::norm(F[1] - v * w[1]));
}

namespace {

// dh via dg = p Re sum conj(F_j) dz_j
std::array<double, 2> chart_grad_exact(const GForm& g, double nu, double zeta) {
    const CPair w = SphereChart::point(nu, zeta);
    const CPair F = g.wirtinger(w);
    const double p = g.degree();
    const cplx e = std::polar(1.0, zeta);
    const double dnu = p * std::real(std::conj(F[0]) * (-std::sin(nu)) + std::conj(F[1]) * e * std::cos(nu));
    const double dze = p * std::real(std::conj(F[1]) * cplx(0, 1) * e * std::sin(nu));
    return {dnu, dze};
}

}  // namespace

std::array<double, 2> chart_gradient(const GForm& g, double nu, double zeta, double s) {
    return {(g.h(nu + s, zeta) - g.h(nu - s, zeta)) / (2 * s), (g.h(nu, zeta + s) - g.h(nu, zeta - s)) / (2 * s)};
}

// ---------------------------------------------------------------- trig equation

namespace {

double ftrig(double th, double rho, double tau) { return std::sin(2 * th) + rho * std::sin(th - tau); }
double dftrig(double th, double rho, double tau) { return 2 * std::cos(2 * th) + rho * std::cos(th - tau); }

double polish(double th, double rho, double tau, double lo, double hi) {
    for (int i = 0; i < 3; ++i) {
        const double d = dftrig(th, rho, tau);
        if (d == 0) break;
        const double nt = th - ftrig(th, rho, tau) / d;
        if (!(nt >= lo && nt <= hi)) break;
        if (std::abs(ftrig(nt, rho, tau)) > std::abs(ftrig(th, rho, tau))) break;
        th = nt;
    }
    return th;
}

// phi(theta) = -sin 2theta / sin(theta - tau); f = sin(theta - tau)(rho - phi)
double phi(double th, double tau) { return -std::sin(2 * th) / std::sin(th - tau); }

double argmax_phi(double tau) {
    return golden_max([tau](double t) { return phi(t, tau); }, kPi / 2, kPi);
}

TrigSolveResult solve_lower(double rho, double tau) {
    // tau in (0, pi/2)
    TrigSolveResult res;
    res.rho = rho;
    res.tau = tau;
    const double ts = argmax_phi(tau);
    res.rho_star = phi(ts, tau);
    auto F = [&](double t) { return ftrig(t, rho, tau); };
    if (rho == 0) {
        for (int j = 0; j < 4; ++j) res.theta[j] = j * kPi / 2;
        res.count = 4;
        return res;
    }
    res.theta[0] = polish(bisect(F, 0.0, tau), rho, tau, 0.0, tau);
    res.theta[3] = polish(bisect(F, kPi + tau, 1.5 * kPi), rho, tau, kPi + tau, 1.5 * kPi);
    const double tol = 1e-12 * std::max(1.0, res.rho_star);
    if (rho < res.rho_star - tol) {
        auto G = [&](double t) { return rho - phi(t, tau); };
        res.theta[1] = polish(bisect(G, kPi / 2, ts), rho, tau, kPi / 2, ts);
        res.theta[2] = polish(bisect(G, ts, kPi), rho, tau, ts, kPi);
        res.count = 4;
    } else if (rho <= res.rho_star + tol) {
        res.theta[1] = res.theta[2] = ts;
        res.count = 3;
        res.merged = true;
    } else {
        res.count = 2;
    }
    return res;
}

}  // namespace

double rho_star(double tau) {
    if (!(tau > 0 && tau < kPi)) throw ValidationError("tau must lie in (0, pi)");
    if (tau == kPi / 2) return 2.0;
    const double t = tau < kPi / 2 ? tau : kPi - tau;
    return phi(argmax_phi(t), t);
}

TrigSolveResult solve_trig(double rho, double tau) {
    if (!(rho >= 0)) throw ValidationError("rho must be nonnegative");
    if (!(tau > 0 && tau < kPi)) throw ValidationError("tau must lie in (0, pi)");
    if (tau == kPi / 2) {
        TrigSolveResult r;
        r.rho = rho;
        r.tau = tau;
        r.rho_star = 2.0;
        r.theta[1] = kPi / 2;
        r.theta[3] = 1.5 * kPi;
        if (rho <= 2.0) {
            r.theta[0] = std::asin(rho / 2);
            r.theta[2] = kPi - std::asin(rho / 2);
        }
        r.count = rho < 2.0 ? 4 : 2;
        r.merged = rho == 2.0;
        return r;
    }
    if (tau < kPi / 2) return solve_lower(rho, tau);
    // f_{rho,tau}(pi - t) = -f_{rho,pi-tau}(t)
    const TrigSolveResult m = solve_lower(rho, kPi - tau);
    TrigSolveResult r = m;
    r.tau = tau;
    if (m.theta[2]) r.theta[0] = kPi - *m.theta[2];
    else r.theta[0].reset();
    if (m.theta[1]) r.theta[1] = kPi - *m.theta[1];
    else r.theta[1].reset();
    r.theta[2] = kPi - *m.theta[0];
    r.theta[3] = 3 * kPi - *m.theta[3];
    if (rho == 0) r.theta[3] = 1.5 * kPi;
    return r;
}

// ---------------------------------------------------------------- analytic tables

namespace {

constexpr double kS2 = 0.70710678118654752440;

CPair pt(cplx a, cplx b) { return {a, b}; }

CriticalSet mk(std::string label, std::vector<CPair> gens, double value, OrbitKind kind = OrbitKind::Point,
               std::string cond = "") {
    CriticalSet s;
    s.label = std::move(label);
    s.generators = std::move(gens);
    s.value = value;
    s.kind = kind;
    s.condition = std::move(cond);
    return s;
}

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a) + std::abs(b)); }

void require_valid(const GForm& g) {
    const auto v = g.constraint_violations();
    if (!v.empty()) throw ValidationError(g.name() + ": " + v.front() + " (use gmin_numeric outside the tables)");
}

// NLS1 is NLS2 with sigma = 0.
std::vector<CriticalSet> crit_nls12(double a, double b, double s, bool nls1) {
    std::vector<CriticalSet> out;
    if (a == 0 && b == 0) {
        out.push_back(mk(nls1 ? "whole_sphere" : "whole_sphere", {pt(1, 0)}, s, OrbitKind::WholeSphere));
        return out;
    }
    out.push_back(mk(nls1 ? "A1" : "A3", {pt(0, 1)}, b + s));
    out.push_back(mk(nls1 ? "A2" : "A4", {pt(1, 0)}, a + s));
    if (a * b > 0) {
        const double m = a * b / (a + b) + s;
        out.push_back(mk(nls1 ? "mixed" : (b > 0 ? "A5" : "A6"),
                         {pt(std::sqrt(b / (a + b)), std::sqrt(a / (a + b)))}, m, OrbitKind::FreePhase,
                         "alpha*beta > 0"));
    }
    return out;
}

AnalyticMin gmin_nls12(double a, double b, double s, bool nls1) {
    auto crit = crit_nls12(a, b, s, nls1);
    AnalyticMin r;
    if (a == 0 && b == 0) {
        r.g_min = s;
        r.T0 = crit;
    } else if (b > 0) {
        // alpha >= beta > 0: the mixed free-phase orbit is below both poles
        r.g_min = crit[2].value;
        r.T0 = {crit[2]};
    } else {
        r.g_min = b + s;
        r.T0 = {crit[0]};
        if (a == b) r.T0.push_back(crit[1]);
    }
    for (auto& c : r.T0) c.is_minimum = true;
    return r;
}

std::vector<CriticalSet> crit_nls3(double a1, double a2, double r) {
    std::vector<CriticalSet> out;
    if (a2 == 0) {
        out.push_back(mk("A10", {pt(1, 0)}, 3 * a1 + r, OrbitKind::RealCircle, "alpha2 = 0"));
    } else {
        out.push_back(mk("A7", {pt(1, 0), pt(0, 1)}, 3 * a1 + a2 + r));
        out.push_back(mk("A8", {pt(kS2, kS2), pt(kS2, -kS2)}, 3 * a1 - a2 + r));
    }
    out.push_back(mk("A9", {pt(kS2, cplx(0, kS2)), pt(kS2, cplx(0, -kS2))}, 2 * a1 + r));
    return out;
}

AnalyticMin gmin_nls3(double a1, double a2, double r) {
    auto crit = crit_nls3(a1, a2, r);
    AnalyticMin res;
    res.g_min = std::min(3 * a1 - a2 + r, 2 * a1 + r);
    if (a1 > a2) res.T0 = {crit.back()};
    else if (a2 == 0 && a1 == -1) res.T0 = {crit[0]};
    else res.T0 = {crit[1]};
    for (auto& c : res.T0) c.is_minimum = true;
    return res;
}

struct Nls4Values {
    double g1, g2, g3, g4;
};

Nls4Values nls4_values(double a1, double a2, double a3, double r) {
    return {3 * a1 + a2 + 2 * a3 + r, 3 * a1 + a2 - 2 * a3 + r,
            a2 > 0 ? -a3 * a3 / (2 * a2) + 3 * a1 - a2 + r : NAN,
            a1 + a2 != 0 ? -a3 * a3 / (a1 + a2) + 2 * a1 + r : NAN};
}

std::vector<CriticalSet> crit_nls4(double a1, double a2, double a3, double r) {
    const auto v = nls4_values(a1, a2, a3, r);
    std::vector<CriticalSet> out;
    out.push_back(mk("A11", {pt(1, 0)}, v.g1));
    out.push_back(mk("A12", {pt(0, 1)}, v.g2));
    if (a3 < 2 * a2) {
        const double x = std::sqrt((2 * a2 - a3) / (4 * a2)), y = std::sqrt((2 * a2 + a3) / (4 * a2));
        out.push_back(mk("A13", {pt(x, y), pt(x, -y)}, v.g3, OrbitKind::Point, "alpha3 < 2 alpha2"));
    }
    const double s = a1 + a2;
    if (a3 < std::abs(s)) {
        const double x = std::sqrt((s - a3) / (2 * s)), y = std::sqrt((s + a3) / (2 * s));
        out.push_back(mk("A14", {pt(x, cplx(0, y)), pt(x, cplx(0, -y))}, v.g4, OrbitKind::Point,
                         "alpha3 < |alpha1 + alpha2|"));
    }
    return out;
}

AnalyticMin gmin_nls4(double a1, double a2, double a3, double r) {
    const auto crit = crit_nls4(a1, a2, a3, r);
    const double at = std::max(a1 + a2, 2 * a2);
    AnalyticMin res;
    const double m = std::max(at, a3);
    res.g_min = -a3 * a3 / m + 3 * a1 + a2 - m + r;
    auto find = [&](const std::string& l) {
        for (const auto& c : crit)
            if (c.label == l) return c;
        throw ConvergenceError("internal: missing NLS4 set " + l);
    };
    if (a3 >= at) res.T0 = {find("A12")};
    else if (a1 < a2) res.T0 = {find("A13")};
    else res.T0 = {find("A14")};
    for (auto& c : res.T0) c.is_minimum = true;
    return res;
}

struct Nls5Tc {
    bool exists = false;
    double value = NAN;
    std::vector<CPair> gens;
};

double nls5_bound(double a1, double a2, double eta) {
    const double s = a1 + a2, d = a1 - a2;
    return s * s * d * d / (a1 * a1 + a2 * a2 - 2 * a1 * a2 * std::cos(2 * eta));
}

Nls5Tc nls5_tc(double a1, double a2, double a3, double r, double eta) {
    Nls5Tc t;
    if (a1 == a2) return t;
    const double bound = nls5_bound(a1, a2, eta);
    if (!(a3 * a3 < bound)) return t;
    const double s = a1 + a2, d = a1 - a2;
    const double q = s - a3 * std::cos(eta);
    const double x2 = q / (2 * s);
    if (!(x2 > 0)) return t;
    const double im = std::sqrt(std::max(0.0, 1 - a3 * a3 / bound));
    for (int sg : {1, -1}) {
        const cplx w2 = std::sqrt(s / (2 * q)) * cplx(-sg * a3 * std::sin(eta) / d, im);
        t.gens.push_back(pt(sg * std::sqrt(x2), w2));
    }
    t.exists = true;
    t.value = -a3 * a3 * (a1 - a2 * std::cos(2 * eta)) / (a1 * a1 - a2 * a2) + 2 * a1 + r;
    return t;
}

std::vector<CriticalSet> crit_nls5(double a1, double a2, double a3, double r, double eta) {
    const auto tr = solve_trig(a3 / a2, eta);
    std::vector<CriticalSet> out;
    const char* labels[4] = {"A15", "A16", "A17", "A18"};
    std::vector<std::pair<double, std::string>> roots;
    for (int j = 0; j < 4; ++j) {
        if (!tr.theta[j]) continue;
        const double th = *tr.theta[j];
        bool merged = false;
        for (auto& [t0, lab] : roots)
            if (std::abs(t0 - th) < 1e-9) lab += std::string("|") + labels[j], merged = true;
        if (!merged) roots.emplace_back(th, labels[j]);
    }
    for (const auto& [th, lab] : roots) {
        const double gj = a2 * std::cos(2 * th) + 2 * a3 * std::cos(th - eta) + 3 * a1 + r;
        out.push_back(mk(lab, {pt(std::cos(th / 2), std::sin(th / 2))}, gj, OrbitKind::Point,
                         lab.find('|') != std::string::npos ? "alpha3 = rho_*(eta) alpha2 (merged root)" : ""));
    }
    const auto tc = nls5_tc(a1, a2, a3, r, eta);
    if (tc.exists)
        out.push_back(mk("A19", tc.gens, tc.value, OrbitKind::Point,
                         "alpha1 != alpha2 and alpha3^2 < (a1+a2)^2(a1-a2)^2/(a1^2+a2^2-2a1a2cos2eta)"));
    return out;
}

AnalyticMin gmin_nls5(double a1, double a2, double a3, double r, double eta) {
    const auto crit = crit_nls5(a1, a2, a3, r, eta);
    AnalyticMin res;
    const bool cond = a1 > a2 && a3 * a3 < nls5_bound(a1, a2, eta);
    for (const auto& c : crit) {
        const bool pick = cond ? c.label == "A19" : c.label.find("A18") != std::string::npos;
        if (pick) {
            res.T0.push_back(c);
            res.g_min = c.value;
        }
    }
    if (res.T0.empty()) throw ConvergenceError("NLS5 tables: minimizing family not found");
    for (auto& c : res.T0) c.is_minimum = true;
    return res;
}

std::vector<CriticalSet> crit_co(double kappa, double gamma) {
    std::vector<CriticalSet> out;
    auto hval = [&](const CPair& w) { return GForm::colin_ohta(kappa, gamma)(w); };
    out.push_back(mk("A0", {pt(0, 1)}, -1.0));
    // the zeta = pi root with nu < 0 solves the slice equation only formally: |z2|^3 flips sign there
    for (int m = 1; m <= 3; ++m) {
        const double nu = co_nu(m, gamma, kappa);
        if (std::isnan(nu)) continue;
        // same story on the zeta = 0 slice: for gamma > 1 the nu2 root is negative and not critical
        if (m <= 2 && nu < 0) continue;
        // nu3 sits on the zeta = pi slice
        const CPair w = m <= 2 ? pt(std::cos(nu), std::sin(nu)) : pt(std::cos(nu), -std::sin(nu));
        const bool inJ = m <= 3 && co_in_J(m, gamma, kappa);
        const std::string lab = inJ ? "A" + std::to_string(m) : "nu" + std::to_string(m);
        out.push_back(mk(lab, {w}, hval(w), OrbitKind::Point, inJ ? "(gamma,kappa) in J" + std::to_string(m) : ""));
    }
    // nu1 == nu2 on the curve kappa^2 = 2 gamma (1 - gamma)
    for (std::size_t i = 1; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (orbit_distance(out[i].generators[0], out[j].generators[0], {1, 2}) < 1e-12) {
                out[i].label += "|" + out[j].label;
                out.erase(out.begin() + j);
                --j;
            }
    return out;
}

AnalyticMin gmin_co(double kappa, double gamma) {
    const auto crit = crit_co(kappa, gamma);
    auto find = [&](const std::string& l) {
        for (const auto& c : crit)
            if (c.label.rfind(l, 0) == 0) return c;
        throw ConvergenceError("internal: missing CO set " + l);
    };
    AnalyticMin res;
    const bool one = gamma > 1 || (gamma <= 1 && kappa > co_kappa_c(gamma) && !(gamma == 1 && kappa == 0));
    if (one) {
        res.T0 = {find("A1")};
        res.g_min = res.T0[0].value;
    } else if (gamma < 1 && close(kappa, co_kappa_c(gamma), 1e-14)) {
        res.T0 = {find("A0"), find("A1")};
        res.g_min = -1;
    } else {
        res.T0 = {find("A0")};
        res.g_min = -1;
    }
    for (auto& c : res.T0) c.is_minimum = true;
    return res;
}

}  // namespace

double co_kappa_c(double gamma) { return 0.5 * (gamma + 2) * std::sqrt(1 - gamma); }

bool co_in_J(int m, double gamma, double kappa) {
    const double t = std::sqrt(std::max(0.0, 2 * gamma * (1 - gamma)));
    switch (m) {
        case 1: return (gamma > 1 || (gamma <= 1 && kappa >= t)) && !(gamma == 1 && kappa == 0);
        case 2: return gamma < 1 && kappa >= t;
        case 3: return kappa > std::pow(gamma, 1.5) / std::sqrt(2.0);
        default: return false;
    }
}

double co_nu(int m, double gamma, double kappa) {
    if (m <= 2) {
        const double disc = kappa * kappa + 2 * gamma * (gamma - 1);
        if (disc < 0) return NAN;
        const double den = m == 1 ? kappa + std::sqrt(disc) : kappa - std::sqrt(disc);
        if (den == 0) return NAN;
        if (m == 2 && disc == 0) return NAN;  // coincides with nu1
        return std::atan(gamma / den);
    }
    const double d3 = std::sqrt(kappa * kappa + 2 * gamma * (gamma + 1));
    if (m == 3) return std::atan(gamma / (d3 - kappa));
    if (m == 4) return -std::atan(gamma / (d3 + kappa));
    return NAN;
}

AnalyticMin gmin_analytic(const GForm& g) {
    const auto& q = g.params();
    switch (g.tag()) {
        case FormTag::NLS1: require_valid(g); return gmin_nls12(q.alpha, q.beta, 0.0, true);
        case FormTag::NLS2: require_valid(g); return gmin_nls12(q.alpha, q.beta, q.sigma, false);
        case FormTag::NLS3: require_valid(g); return gmin_nls3(q.alpha1, q.alpha2, q.r);
        case FormTag::NLS4: require_valid(g); return gmin_nls4(q.alpha1, q.alpha2, q.alpha3, q.r);
        case FormTag::NLS5: require_valid(g); return gmin_nls5(q.alpha1, q.alpha2, q.alpha3, q.r, q.eta);
        case FormTag::CO: require_valid(g); return gmin_co(q.kappa, q.gamma);
        case FormTag::Custom: break;
    }
    throw ValidationError("gmin_analytic: Custom g has no closed-form table; use gmin_numeric");
}

// ---------------------------------------------------------------- numeric oracle

namespace {

// g restricted to the chart, row by row. For n = (1,1) quartics the evaluator is
// fitted exactly in the 9-dim space of gauge-invariant quartics so a grid row
// costs a few flops per point.
class RowEvaluator {
public:
    RowEvaluator(const GForm& g, int N) : g_(g), N_(N), cz_(N), sz_(N), c2_(N), cs_(N) {
        for (int k = 0; k < N; ++k) {
            const double z = 2 * kPi * k / N;
            cz_[k] = std::cos(z);
            sz_[k] = std::sin(z);
            c2_[k] = cz_[k] * cz_[k];
            cs_[k] = cz_[k] * sz_[k];
        }
        if (g.degree() == 4 && g.gauge() == std::array<int, 2>{1, 1}) fit();
    }

    void row(double nu, std::vector<double>& out) const {
        out.resize(N_);
        const double c = std::cos(nu), s = std::sin(nu);
        if (fitted_) {
            const double P = c * c, R = s * s, m = c * s, m2 = m * m;
            const auto& q = q_;
            // basis: PP PR RR PX RX PY RY XX XY  (YY = PR - XX eliminated)
            const double A = q[0] * P * P + q[1] * P * R + q[2] * R * R;
            const double B = q[3] * P + q[4] * R, C = q[5] * P + q[6] * R;
            for (int k = 0; k < N_; ++k) out[k] = A + m * (B * cz_[k] + C * sz_[k]) + m2 * (q[7] * c2_[k] + q[8] * cs_[k]);
            return;
        }
        for (int k = 0; k < N_; ++k) out[k] = g_(CPair{cplx(c, 0), cplx(s * cz_[k], s * sz_[k])});
    }

    bool fitted() const { return fitted_; }

private:
    static std::array<double, 9> basis(const CPair& z) {
        const double P = std::norm(z[0]), R = std::norm(z[1]);
        const cplx w = std::conj(z[0]) * z[1];
        const double X = w.real(), Y = w.imag();
        return {P * P, P * R, R * R, P * X, R * X, P * Y, R * Y, X * X, X * Y};
    }

    void fit() {
        // deterministic sample points on C^2
        std::vector<CPair> pts;
        for (int i = 0; i < 60; ++i) {
            const double a = 0.37 + 1.13 * i, b = 2.71 * i + 0.11, c = 1.618 * i + 0.5, d = 0.577 * i * i + 0.3;
            pts.push_back(CPair{cplx(std::cos(a), std::sin(b)), cplx(std::sin(c), std::cos(d))});
        }
        Eigen::MatrixXd A(30, 9);
        Eigen::VectorXd y(30);
        for (int i = 0; i < 30; ++i) {
            const auto b = basis(pts[i]);
            for (int j = 0; j < 9; ++j) A(i, j) = b[j];
            y(i) = g_(pts[i]);
        }
        Eigen::VectorXd q = A.colPivHouseholderQr().solve(y);
        double err = 0, scale = 1e-300;
        for (int i = 30; i < 60; ++i) {
            const auto b = basis(pts[i]);
            double v = 0;
            for (int j = 0; j < 9; ++j) v += q(j) * b[j];
            const double gv = g_(pts[i]);
            err = std::max(err, std::abs(v - gv));
            scale = std::max(scale, std::abs(gv));
        }
        if (err <= 1e-12 * std::max(scale, 1.0)) {
            for (int j = 0; j < 9; ++j) q_[j] = q(j);
            fitted_ = true;
        }
    }

    const GForm& g_;
    int N_;
    std::vector<double> cz_, sz_, c2_, cs_;
    std::array<double, 9> q_{};
    bool fitted_ = false;
};

struct Cand {
    double v;
    int i, k;
    bool operator<(const Cand& o) const { return std::tie(v, i, k) < std::tie(o.v, o.i, o.k); }
};

// Newton on grad h = 0 with a finite-difference Jacobian of the exact gradient.
bool newton_polish(const GForm& g, double& nu, double& ze, bool require_min) {
    for (int it = 0; it < 8; ++it) {
        const auto gr = chart_grad_exact(g, nu, ze);
        const double e = 1e-5;
        const auto a = chart_grad_exact(g, nu + e, ze), b = chart_grad_exact(g, nu - e, ze);
        const auto c = chart_grad_exact(g, nu, ze + e), d = chart_grad_exact(g, nu, ze - e);
        Eigen::Matrix2d H;
        H << (a[0] - b[0]) / (2 * e), (c[0] - d[0]) / (2 * e), (a[1] - b[1]) / (2 * e), (c[1] - d[1]) / (2 * e);
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
        const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
        const double emin = require_min ? es.eigenvalues()(0) : es.eigenvalues().cwiseAbs().minCoeff();
        if (!(emin > 1e-7 * std::max(emax, 1e-300))) return false;
        const Eigen::Vector2d st = H.ldlt().solve(Eigen::Vector2d(gr[0], gr[1]));
        if (!(st.norm() < 1e-3)) return false;
        const double h0 = g.h(nu, ze);
        const double n1 = nu - st(0), z1 = ze - st(1);
        if (require_min && g.h(n1, z1) > h0 + 4e-16 * std::max(1.0, std::abs(h0))) return it > 0;
        nu = n1, ze = z1;
        if (st.norm() < 1e-14) break;
    }
    return true;
}

}  // namespace

NumericMin gmin_numeric(const GForm& g, const NumericOptions& opt) {
    const int N = opt.grid;
    const auto n = g.gauge();
    RowEvaluator ev(g, N);
    const double dnu = (kPi / 2) / (N - 1);
    std::vector<double> prev, cur, next;
    std::priority_queue<Cand> heap;  // max-heap of the best `seeds`
    auto offer = [&](Cand c) {
        if ((int)heap.size() < opt.seeds) heap.push(c);
        else if (c < heap.top()) heap.pop(), heap.push(c);
    };
    double gmax = -INFINITY, gmin_grid = INFINITY;
    ev.row(0.0, cur);
    ev.row(dnu, next);
    for (int i = 0; i < N; ++i) {
        for (double v : cur) gmax = std::max(gmax, v), gmin_grid = std::min(gmin_grid, v);
        if (i == 0 || i == N - 1) {
            // pole rows are a single orbit each
            const auto& nb = i == 0 ? next : prev;
            if (cur[0] <= *std::min_element(nb.begin(), nb.end())) offer({cur[0], i, 0});
        } else {
            for (int k = 0; k < N; ++k) {
                const double v = cur[k];
                const int km = (k + N - 1) % N, kp = (k + 1) % N;
                if (v <= cur[km] && v <= cur[kp] && v <= prev[k] && v <= next[k] && v <= prev[km] && v <= prev[kp] &&
                    v <= next[km] && v <= next[kp])
                    offer({v, i, k});
            }
        }
        prev.swap(cur);
        cur.swap(next);
        if (i + 2 < N) ev.row((i + 2) * dnu, next);
    }
    std::vector<Cand> seeds;
    while (!heap.empty()) seeds.push_back(heap.top()), heap.pop();
    std::sort(seeds.begin(), seeds.end());

    NumericMin res;
    const double scale = std::max({1.0, std::abs(gmax), std::abs(gmin_grid)});
    if (gmax - gmin_grid <= 1e-12 * scale) {
        res.g_min = gmin_grid;
        res.degenerate = true;
        res.minimizers.push_back(CPair{1, 0});
        res.chart.emplace_back(0.0, 0.0);
        return res;
    }
    struct Refined {
        double v, nu, ze;
    };
    std::vector<Refined> ref;
    const double dze = 2 * kPi / N;
    for (const auto& s : seeds) {
        const double nu0 = s.i * dnu, ze0 = s.k * dze;
        auto f = [&](const std::vector<double>& x) { return g.h(x[0], x[1]); };
        auto r = detail::nelder_mead(f, {nu0, ze0}, 2 * std::max(dnu, dze), 1e-13);
        double nu = r.x[0], ze = r.x[1];
        const double s2 = std::abs(std::sin(2 * nu));
        if (s2 > 1e-6) newton_polish(g, nu, ze, true);
        ref.push_back({g.h(nu, ze), nu, ze});
    }
    std::sort(ref.begin(), ref.end(), [](auto& a, auto& b) { return a.v < b.v; });
    res.g_min = ref.front().v;
    const double vtol = 1e-9 * std::max(1.0, std::abs(res.g_min));
    for (const auto& r : ref) {
        if (r.v > res.g_min + vtol) break;
        const CPair w = canonicalize(SphereChart::point(r.nu, r.ze), n);
        bool dup = false;
        for (const auto& m : res.minimizers)
            if (orbit_distance(w, m, n) < opt.cluster) dup = true;
        if (dup) continue;
        res.minimizers.push_back(w);
        res.chart.push_back(SphereChart::coords(w, n));
    }
    res.degenerate = res.minimizers.size() >= 8;
    return res;
}

// ---------------------------------------------------------------- critical points

namespace {

std::vector<CriticalSet> numeric_critical(const GForm& g) {
    const auto n = g.gauge();
    const int N = 256;
    const double dnu = (kPi / 2) / N, dze = 2 * kPi / N;
    // |grad h|^2 on a staggered interior grid
    std::vector<double> G2((N - 1) * N);
    double gscale = 1e-300;
    for (int i = 1; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const auto gr = chart_grad_exact(g, i * dnu, k * dze);
            G2[(i - 1) * N + k] = gr[0] * gr[0] + gr[1] * gr[1];
            gscale = std::max(gscale, std::abs(g.h(i * dnu, k * dze)));
        }
    std::vector<std::pair<double, double>> cands;
    for (int i = 1; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const double v = G2[(i - 1) * N + k];
            bool lm = true;
            for (int di = -1; di <= 1 && lm; ++di)
                for (int dk = -1; dk <= 1; ++dk) {
                    const int ii = i + di;
                    if ((di == 0 && dk == 0) || ii < 1 || ii >= N) continue;
                    if (G2[(ii - 1) * N + (k + dk + N) % N] < v) {
                        lm = false;
                        break;
                    }
                }
            if (lm) cands.emplace_back(i * dnu, k * dze);
        }
    const double numin = gmin_numeric(g, {512, 16, 1e-6}).g_min;
    std::vector<CriticalSet> out;
    auto add = [&](const CPair& w) {
        const CPair c = canonicalize(w, n);
        for (const auto& s : out)
            if (orbit_distance(c, s.generators[0], n) < 1e-6) return;
        CriticalSet s;
        s.label = "numeric" + std::to_string(out.size());
        s.generators = {c};
        s.value = g(c);
        s.provenance = Provenance::Numeric;
        s.is_minimum = s.value <= numin + 1e-9 * std::max(1.0, std::abs(numin));
        out.push_back(s);
    };
    for (CPair pole : {CPair{1, 0}, CPair{0, 1}})
        if (lagrange_residual(g, pole) <= 1e-9 * std::max(1.0, gscale)) add(pole);
    if (cands.size() > 400) cands.resize(400);
    for (auto [nu, ze] : cands) {
        if (newton_polish(g, nu, ze, false)) {
            const CPair w = SphereChart::point(nu, ze);
            if (lagrange_residual(g, w) <= 1e-9 * std::max(1.0, gscale)) add(w);
        }
    }
    return out;
}

}  // namespace

std::vector<CriticalSet> critical_points(const GForm& g) {
    const auto& q = g.params();
    std::vector<CriticalSet> out;
    switch (g.tag()) {
        case FormTag::NLS1: require_valid(g); out = crit_nls12(q.alpha, q.beta, 0.0, true); break;
        case FormTag::NLS2: require_valid(g); out = crit_nls12(q.alpha, q.beta, q.sigma, false); break;
        case FormTag::NLS3: require_valid(g); out = crit_nls3(q.alpha1, q.alpha2, q.r); break;
        case FormTag::NLS4: require_valid(g); out = crit_nls4(q.alpha1, q.alpha2, q.alpha3, q.r); break;
        case FormTag::NLS5: require_valid(g); out = crit_nls5(q.alpha1, q.alpha2, q.alpha3, q.r, q.eta); break;
        case FormTag::CO: require_valid(g); out = crit_co(q.kappa, q.gamma); break;
        case FormTag::Custom: return numeric_critical(g);
    }
    const auto m = gmin_analytic(g);
    for (auto& c : out)
        for (const auto& t : m.T0)
            if (c.label == t.label) c.is_minimum = true;
    return out;
}

}  // namespace nlss
