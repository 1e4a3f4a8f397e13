#include "nlss/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlss {

FieldState VectorProfile::sample(const Grid& g) const {
    FieldState s = FieldState::zeros(g);
    const double y0 = y.size() > 0 ? y[0] : 0.0, y1 = y.size() > 1 ? y[1] : 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.point(i);
        const double r = g.d == 1 ? x[0] - y0 : std::hypot(x[0] - y0, x[1] - y1);
        const double q = prof(r);
        s.u[0][i] = w[0] * q;
        s.u[1][i] = w[1] * q;
    }
    return s;
}

VectorProfile make_profile(const CPair& w, double omega, double a, const ScalarProfile& unit) {
    if (std::abs(norm2(w) - 1) > 1e-10) throw ValidationError("profile direction must be a unit vector");
    VectorProfile v;
    v.w = w;
    v.omega = omega;
    v.a = a;
    v.prof = rescale(unit, omega, a);
    return v;
}

VectorProfile make_profile(const CPair& w, double omega, double a, int d, double p, const GridParams& grid) {
    return make_profile(w, omega, a, solve_Q(d, p, grid));
}

Functionals assemble(double M, double H, double G, double omega, int d, double p) {
    Functionals f;
    f.M = M;
    f.H = H;
    f.G = G;
    f.E = H + G;
    f.S = f.E + omega * M;
    f.K = 2 * H + 2 * omega * M + p * G;
    f.V = 2 * H + d * (p - 2) / 2 * G;
    return f;
}

Functionals functionals(const VectorProfile& v, const GForm& g, double omega) {
    const double p = g.degree();
    const auto& q = v.prof;
    return assemble(0.5 * q.l2sq * norm2(v.w), 0.5 * q.grad_sq * norm2(v.w),
                    g(v.w) * std::pow(norm2(v.w), p / 2) * q.lp / p, omega, q.d, p);
}

Functionals functionals(const FieldState& s, const GForm& g, double omega, const Spectral& sp, std::array<int, 2> n) {
    const Grid& gr = s.grid;
    if (gr.size() != sp.grid().size() || s.u[0].size() != gr.size() || s.u[1].size() != gr.size())
        throw ValidationError("field and spectral grid mismatch");
    const double p = g.degree();
    const double M = 0.5 * (l2sq(gr, s.u[0]) + l2sq(gr, s.u[1]));
    double H = 0;
    std::vector<double> P(gr.d, 0.0);
    for (int j = 0; j < 2; ++j) {
        H += 0.5 * sp.grad_sq(s.u[j]);
        for (int ax = 0; ax < gr.d; ++ax) {
            const auto du = sp.gradient(s.u[j], ax);
            double acc = 0;
            for (std::size_t i = 0; i < du.size(); ++i) acc += std::imag(std::conj(s.u[j][i]) * du[i]);
            P[ax] += acc * gr.cell() / n[j];
        }
    }
    double G = 0;
    for (std::size_t i = 0; i < gr.size(); ++i) G += g(CPair{s.u[0][i], s.u[1][i]});
    G *= gr.cell() / p;
    Functionals f = assemble(M, H, G, omega, gr.d, p);
    f.P = P;
    return f;
}

double g_minimum(const GForm& g) {
    if (g.tag() != FormTag::Custom) return gmin_analytic(g).g_min;
    return gmin_numeric(g).g_min;
}

std::vector<CriticalSet> minimizing_sets(const GForm& g) {
    if (g.tag() != FormTag::Custom) return gmin_analytic(g).T0;
    const auto nm = gmin_numeric(g);
    CriticalSet s;
    s.label = "numeric";
    s.generators = nm.minimizers;
    s.value = nm.g_min;
    s.is_minimum = true;
    s.provenance = Provenance::Numeric;
    s.kind = nm.degenerate ? OrbitKind::WholeSphere : OrbitKind::Point;
    return {s};
}

double action_min(double g_min, int d, double p, double omega, double Q_l2sq) {
    if (!(g_min < 0)) throw NoGroundState("g_min >= 0: no nontrivial standing wave");
    const double sc = s_c(d, p);
    return Q_l2sq * std::pow(-g_min, sc - d / 2.0) * std::pow(omega, 1 - sc) / (2 * (1 - sc));
}

double action_min(const GForm& g, int d, double omega, const ScalarProfile& unit) {
    return action_min(g_minimum(g), d, g.degree(), omega, unit.l2sq);
}

std::vector<VectorProfile> build_ground_states(const GForm& g, int d, double omega, const GridParams& grid) {
    const double gmin = g_minimum(g);
    if (!(gmin < 0)) throw NoGroundState("g_min >= 0: no ground state");
    if (!(omega > 0)) throw ValidationError("omega must be positive");
    const ScalarProfile unit = solve_Q(d, g.degree(), grid);
    std::vector<VectorProfile> out;
    for (const auto& set : minimizing_sets(g))
        for (const auto& w : set.generators) {
            auto v = make_profile(w, omega, -gmin, unit);
            v.label = set.label;
            v.ground = true;
            out.push_back(std::move(v));
        }
    return out;
}

namespace {

// sup_j sup_{r <= R_match} |w_j(-Q'' - (d-1)/r Q' + omega Q) + Q^{p-1} F_j(w)| / sup Q
double vector_residual(const ScalarProfile& q, const CPair& w, const CPair& F) {
    const int d = q.d;
    const double dr = q.dr;
    double res = 0, qmax = 0;
    for (std::size_t i = 0; i + 1 < q.Q.size() && q.r[i] <= q.R_match; ++i) {
        double lap;
        if (i == 0) lap = d * 2 * (q.Q[1] - q.Q[0]) / (dr * dr);
        else
            lap = (q.Q[i + 1] - 2 * q.Q[i] + q.Q[i - 1]) / (dr * dr) +
                  (d - 1) / q.r[i] * (q.Q[i + 1] - q.Q[i - 1]) / (2 * dr);
        const double lin = -lap + q.omega * q.Q[i];
        const double nl = std::pow(std::abs(q.Q[i]), q.p - 1);
        for (int j = 0; j < 2; ++j) res = std::max(res, std::abs(w[j] * lin + nl * F[j]));
        qmax = std::max(qmax, q.Q[i]);
    }
    return res / qmax;
}

}  // namespace

ExcitedReport verify_excited(const GForm& g, const CPair& w, double a, int d, double omega, double tol,
                             const GridParams& grid) {
    if (std::abs(norm2(w) - 1) > 1e-10) throw ValidationError("w must be a unit vector");
    if (tol < 0) tol = d == 3 ? 1e-3 : 1e-5;
    ExcitedReport rep;
    rep.lagrange_residual = lagrange_residual(g, w);
    const auto [nu, zeta] = SphereChart::coords(w, g.gauge());
    if (std::abs(std::sin(2 * nu)) > 1e-6) {
        const auto gr = chart_gradient(g, nu, zeta);
        rep.chart_gradient = std::hypot(gr[0], gr[1]);
    }
    rep.critical = rep.lagrange_residual <= 1e-8 && rep.chart_gradient <= 1e-6;
    rep.g_w = g(w);
    rep.amplitude_ok = a > 0 && std::abs(a + rep.g_w) <= 1e-10 * std::max(1.0, std::abs(a));
    if (a > 0) {
        const auto q = rescale(solve_Q(d, g.degree(), grid), omega, a);
        rep.elliptic_residual = vector_residual(q, w, g.wirtinger(w));
    } else {
        rep.elliptic_residual = std::numeric_limits<double>::infinity();
    }
    const double gmin = g_minimum(g);
    rep.ground = rep.critical && std::abs(rep.g_w - gmin) <= 1e-9 * std::max(1.0, std::abs(gmin));
    rep.pass = rep.critical && rep.amplitude_ok && rep.elliptic_residual <= tol;
    return rep;
}

namespace {
double gn_alpha(int d, double p) { return p / 2 - d * (p - 2) / 4; }
double gn_beta(int d, double p) { return d * (p - 2) / 4; }
}  // namespace

double gn_constant(double g_min, int d, double p, double Q_l2sq) {
    if (!(g_min < 0)) throw NoGroundState("g_min >= 0: the inequality is trivial");
    const double al = gn_alpha(d, p), be = gn_beta(d, p);
    // equality at the ground state: M = al(-G), H = be(-G)
    return -g_min * std::pow(Q_l2sq / (2 * al), (2 - p) / 2) * std::pow(al, -al) * std::pow(be, -be);
}

double gn_constant_statement(double g_min, int d, double p, double Q_l2sq) {
    if (!(g_min < 0)) throw NoGroundState("g_min >= 0: the inequality is trivial");
    return std::pow(2 / (p - 2), p / 2) * std::pow(2.0 / d, d * (p - 2) / 4) *
           std::pow(d - (d - 2) * p / 2, (p - 2) / 2) * std::pow(Q_l2sq, (2 - p) / 2) * (-g_min);
}

double gn_ratio(const Functionals& f, int d, double p) {
    return -f.G / (std::pow(f.M, gn_alpha(d, p)) * std::pow(f.H, gn_beta(d, p)));
}

double well_HM(const Functionals& f, int d, double p) {
    const double sc = s_c(d, p);
    return f.H * std::pow(f.M, (1 - sc) / sc);
}

double well_VM(const Functionals& f, int d, double p) {
    const double sc = s_c(d, p);
    return f.V * std::pow(f.M, (1 - sc) / sc);
}

PotentialWell potential_well(const GForm& g, int d, double omega, const ScalarProfile& unit) {
    const double p = g.degree(), sc = s_c(d, p);
    if (!(sc > 0)) throw ValidationError("potential well needs p > 2 + 4/d");
    const double gmin = g_minimum(g);
    if (!(gmin < 0)) throw NoGroundState("g_min >= 0: no ground state");
    PotentialWell pw;
    pw.I3 = d / (2 * (1 - sc)) * std::pow(0.5 * std::pow(-gmin, sc - d / 2.0) * unit.l2sq, 1 / sc);
    const auto sets = minimizing_sets(g);
    const auto phi = make_profile(sets.front().generators.front(), omega, -gmin, unit);
    const auto f = functionals(phi, g, omega);
    pw.ground_HM = well_HM(f, d, p);
    pw.ground_S = f.S;
    pw.action = action_min(gmin, d, p, omega, unit.l2sq);
    return pw;
}

std::string to_string(Regime r) { return r == Regime::Stable ? "stable" : "unstable"; }

StabilityVerdict stability_verdict(int d, double p, std::array<int, 2> n) {
    if (d < 1 || d > 3) throw ValidationError("d must be 1, 2 or 3");
    if (!(p > 2) || (d == 3 && !(p < 6))) throw ValidationError("p outside (2, 2*)");
    StabilityVerdict v;
    if (p < 2 + 4.0 / d) {
        v.regime = Regime::Stable;
        v.theorem = "stability";
        return v;
    }
    v.regime = Regime::Unstable;
    v.theorem = "instability";
    v.mass_resonance_route = n[0] == 1 && n[1] == 1;
    v.radial_virial_route = d >= 2 && p <= 6;
    v.route_available = !(d == 1 && p >= 6 && !v.mass_resonance_route);
    return v;
}

}  // namespace nlss
