#include "nlss/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <bit>
#include <cstdio>
#include <random>

#include "optim.hpp"

namespace nlss {

SplitStep::SplitStep(const GForm& g, std::array<int, 2> n, const Grid& grid, int order)
    : g_(g), n_(n), sp_(grid), order_(order) {
    if (order != 2 && order != 4) throw ValidationError("split-step order must be 2 or 4");
    if (const auto& l = g.lambdas()) {
        diag_ = true;
        for (int i = 0; i < 12; ++i)
            if (i != 0 && i != 3 && i != 7 && i != 11 && (*l)[i] != 0) diag_ = false;
        c_[0] = (*l)[0], c_[1] = (*l)[3], c_[2] = (*l)[7], c_[3] = (*l)[11];
    }
}

void SplitStep::kick(FieldState& s, double tau) const {
    auto& u1 = s.u[0];
    auto& u2 = s.u[1];
    const std::size_t n = u1.size();
    if (diag_) {
        // moduli are frozen: exact phase rotation
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::norm(u1[i]), b = std::norm(u2[i]);
            u1[i] *= std::polar(1.0, -n_[0] * tau * (c_[0] * a + c_[1] * b));
            u2[i] *= std::polar(1.0, -n_[1] * tau * (c_[2] * a + c_[3] * b));
        }
        return;
    }
    auto rhs = [&](const CPair& z) {
        const CPair F = g_.wirtinger(z);
        return CPair{cplx(0, -n_[0]) * F[0], cplx(0, -n_[1]) * F[1]};
    };
    for (std::size_t i = 0; i < n; ++i) {
        const CPair z{u1[i], u2[i]};
        const CPair k1 = rhs(z);
        const CPair k2 = rhs({z[0] + 0.5 * tau * k1[0], z[1] + 0.5 * tau * k1[1]});
        const CPair k3 = rhs({z[0] + 0.5 * tau * k2[0], z[1] + 0.5 * tau * k2[1]});
        const CPair k4 = rhs({z[0] + tau * k3[0], z[1] + tau * k3[1]});
        u1[i] += tau / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        u2[i] += tau / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
}

void SplitStep::drift(FieldState& s, double dt) {
    const Prop* pr = nullptr;
    for (const auto& q : props_)
        if (q.dt == dt) pr = &q;
    if (!pr) {
        if (props_.size() > 4) props_.clear();
        Prop q{dt, {}};
        for (int j = 0; j < 2; ++j) {
            q.f[j].resize(sp_.k2().size());
            for (std::size_t i = 0; i < q.f[j].size(); ++i) q.f[j][i] = std::polar(1.0, -n_[j] * sp_.k2()[i] * dt);
        }
        props_.push_back(std::move(q));
        pr = &props_.back();
    }
    for (int j = 0; j < 2; ++j) {
        auto& u = s.u[j];
        sp_.forward_inplace(u);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= pr->f[j][i];
        sp_.backward_inplace(u);
    }
}

void SplitStep::strang(FieldState& s, double dt) {
    kick(s, dt / 2);
    drift(s, dt);
    kick(s, dt / 2);
}

void SplitStep::step(FieldState& s, double dt) {
    if (!(dt > 0)) throw ValidationError("dt must be positive");
    if (order_ == 2) {
        strang(s, dt);
    } else {
        const double c = std::cbrt(2.0), w1 = 1 / (2 - c), w0 = -c / (2 - c);
        strang(s, w1 * dt);
        strang(s, w0 * dt);
        strang(s, w1 * dt);
    }
    s.t += dt;
    for (int j = 0; j < 2; ++j)
        for (const auto& z : s.u[j])
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw ConvergenceError("integrator produced a non-finite field at t = " + std::to_string(s.t));
}

void step(FieldState& s, const SystemSpec& spec, double dt) {
    SplitStep ss(spec.nonlinearity(), spec.n, s.grid);
    ss.step(s, dt);
}

FieldState standing_wave_solution(const VectorProfile& v, std::array<int, 2> n, double t, const Grid& grid) {
    FieldState s = v.sample(grid);
    for (int j = 0; j < 2; ++j) {
        const cplx ph = std::polar(1.0, n[j] * v.omega * t);
        for (auto& z : s.u[j]) z *= ph;
    }
    s.t = t;
    return s;
}

FieldState pseudo_conformal_blowup(const VectorProfile& v, double b, double t, const Grid& grid) {
    const int d = grid.d;
    const double p = v.prof.p;
    if (std::abs(p - (2 + 4.0 / d)) > 1e-12) throw ValidationError("pseudo-conformal transform needs p = 2 + 4/d");
    if (!(b > 0)) throw ValidationError("b must be positive");
    if (!(t < b * b)) throw ValidationError("pseudo-conformal solution is defined for t < b^2");
    const double L = 1 - t / (b * b), s = t / L;
    const double amp = std::pow(L, -d / 2.0);
    const cplx rot = std::polar(1.0, v.omega * s);
    FieldState out = FieldState::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.point(i);
        const double r2 = d == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
        const double q = v.prof(std::sqrt(r2) / L);
        const cplx ph = amp * rot * std::polar(1.0, -r2 / (4 * (b * b - t)));
        out.u[0][i] = v.w[0] * q * ph;
        out.u[1][i] = v.w[1] * q * ph;
    }
    out.t = t;
    return out;
}

std::array<double, 5> chi0(double s) {
    s = std::abs(s);
    if (s <= 1) return {s * s, 2 * s, 2, 0, 0};
    if (s >= 2) return {49.0 / 22.0, 0, 0, 0, 0};
    // chi0' on [1,2]: degree-11 polynomial in x = s - 1 matching 2 + 2x to 5th order at x = 0 and
    // vanishing to 5th order at x = 1, so Delta^2 chi is C^2 and grid quadrature stays accurate
    static constexpr double a[12] = {2, 2, 0, 0, 0, 0, -1428, 6060, -10530, 9310, -4172, 756};
    const double x = s - 1;
    double pw[13];
    pw[0] = 1;
    for (int i = 1; i <= 12; ++i) pw[i] = pw[i - 1] * x;
    std::array<double, 5> out{1, 0, 0, 0, 0};
    for (int i = 0; i < 12; ++i) {
        out[0] += a[i] * pw[i + 1] / (i + 1);
        out[1] += a[i] * pw[i];
        if (i >= 1) out[2] += i * a[i] * pw[i - 1];
        if (i >= 2) out[3] += i * (i - 1) * a[i] * pw[i - 2];
        if (i >= 3) out[4] += i * (i - 1) * (i - 2) * a[i] * pw[i - 3];
    }
    return out;
}

VirialPair localized_virial(const FieldState& s, const GForm& g, std::array<int, 2> n, double R, const Spectral& sp) {
    if (!(R > 0)) throw ValidationError("localization radius must be positive");
    const Grid& gr = s.grid;
    const int d = gr.d;
    const double p = g.degree();
    std::array<std::array<std::vector<cplx>, 2>, 2> du;  // [component][axis]
    for (int j = 0; j < 2; ++j)
        for (int ax = 0; ax < d; ++ax) du[j][ax] = sp.gradient(s.u[j], ax);
    double J = 0, kin = 0, bih = 0, pot = 0;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        const auto x = gr.point(i);
        const double rho = d == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        const double sr = rho / R;
        const auto c = chi0(sr);
        if (c[1] == 0 && c[2] == 0 && sr >= 2) continue;
        // chi(rho) = R^2 chi0(rho/R)
        const double chi1 = R * c[1], chi2 = c[2];
        const double chi1_over_rho = sr < 1 ? 2.0 : chi1 / rho;
        double xh[2] = {0, 0};
        if (rho > 0) {
            xh[0] = x[0] / rho;
            if (d == 2) xh[1] = x[1] / rho;
        }
        double psi1 = 0, psi2 = 0;
        if (sr > 1) {
            psi1 = c[3] + (d - 1) * (c[2] / sr - c[1] / (sr * sr));
            psi2 = c[4] + (d - 1) * (c[3] / sr - 2 * c[2] / (sr * sr) + 2 * c[1] / (sr * sr * sr));
        }
        const double lap_chi = chi2 + (d - 1) * chi1_over_rho;
        const double bilap = (psi2 + (d - 1) * (sr > 0 ? psi1 / sr : 0)) / (R * R);
        for (int j = 0; j < 2; ++j) {
            cplx radial = 0;
            double grad2 = 0, cur = 0;
            for (int ax = 0; ax < d; ++ax) {
                const cplx v = du[j][ax][i];
                radial += xh[ax] * v;
                grad2 += std::norm(v);
                cur += xh[ax] * std::imag(std::conj(s.u[j][i]) * v);
            }
            const double rad2 = std::norm(radial);
            J += 2 * chi1 * cur / n[j];
            kin += 4 * (chi2 * rad2 + chi1_over_rho * (grad2 - rad2));
            bih += bilap * std::norm(s.u[j][i]);
        }
        pot += lap_chi * g(CPair{s.u[0][i], s.u[1][i]});
    }
    const double cell = gr.cell();
    return {J * cell, (kin - bih + 2 * (p - 2) / p * pot) * cell};
}

namespace {

double h1sq(const std::vector<cplx>& fh, const Spectral& sp) {
    double s = 0;
    for (std::size_t i = 0; i < fh.size(); ++i) s += std::norm(fh[i]) * (1 + sp.k2()[i]);
    return s * sp.grid().cell() / fh.size();
}

// best Re sum_j e^{-i n_j theta} c_j over admissible phases
double phase_opt(const CPair& c, std::array<int, 2> n, bool free_phases) {
    if (free_phases) return std::abs(c[0]) + std::abs(c[1]);
    if (n[0] == n[1]) return std::abs(c[0] + c[1]);
    auto f = [&](double th) { return std::real(std::polar(1.0, -n[0] * th) * c[0] + std::polar(1.0, -n[1] * th) * c[1]); };
    const int M = 128;
    double best = -1e300, arg = 0;
    for (int k = 0; k < M; ++k) {
        const double th = 2 * kPi * k / M;
        if (const double v = f(th); v > best) best = v, arg = th;
    }
    return std::max(best, f(detail::golden_max(f, arg - 2 * kPi / M, arg + 2 * kPi / M, 1e-12)));
}

}  // namespace

double orbit_distance(const FieldState& s, const std::vector<VectorProfile>& orbit, std::array<int, 2> n,
                      bool free_phases, const Spectral& sp) {
    const Grid& gr = s.grid;
    const double cell = gr.cell();
    std::array<std::vector<cplx>, 2> uh;
    double nu = 0;
    for (int j = 0; j < 2; ++j) {
        sp.forward(s.u[j], uh[j]);
        nu += h1sq(uh[j], sp);
    }
    double best = 1e300;
    std::vector<cplx> ph, corr;
    for (const auto& v : orbit) {
        const FieldState phi = v.sample(gr);
        std::array<std::vector<cplx>, 2> X, c;
        double np = 0;
        for (int j = 0; j < 2; ++j) {
            sp.forward(phi.u[j], ph);
            np += h1sq(ph, sp);
            X[j].resize(ph.size());
            for (std::size_t i = 0; i < ph.size(); ++i) X[j][i] = uh[j][i] * std::conj(ph[i]) * (1 + sp.k2()[i]);
            sp.backward(X[j], c[j]);
        }
        std::size_t arg = 0;
        double top = -1;
        for (std::size_t i = 0; i < gr.size(); ++i) {
            const double o = phase_opt({c[0][i] * cell, c[1][i] * cell}, n, free_phases);
            if (o > top) top = o, arg = i;
        }
        // continuous shift refinement from the best grid shift
        auto shift_of = [&](std::size_t idx) {
            std::vector<double> y(gr.d);
            const std::size_t ii[2] = {gr.d == 1 ? idx : idx / gr.N, idx % gr.N};
            for (int ax = 0; ax < gr.d; ++ax) {
                const int m = static_cast<int>(ii[ax]);
                y[ax] = (m <= gr.N / 2 ? m : m - gr.N) * gr.h();
            }
            return y;
        };
        const double norm = cell / static_cast<double>(gr.size());
        auto obj = [&](const std::vector<double>& y) {
            CPair cc{0.0, 0.0};
            for (std::size_t i = 0; i < gr.size(); ++i) {
                double arg_k = sp.k(0)[i] * y[0];
                if (gr.d == 2) arg_k += sp.k(1)[i] * y[1];
                const cplx e = std::polar(1.0, arg_k);
                cc[0] += X[0][i] * e;
                cc[1] += X[1][i] * e;
            }
            return -phase_opt({cc[0] * norm, cc[1] * norm}, n, free_phases);
        };
        const auto r = detail::nelder_mead(obj, shift_of(arg), 0.3 * gr.h(), 1e-10, 0.0, 400);
        top = std::max(top, -r.f);
        best = std::min(best, nu + np - 2 * top);
    }
    return std::sqrt(std::max(0.0, best));
}

void write_csv(std::ostream& os, const Diagnostics& d) {
    os << "t,M,E,P,H,V,J,orbit_dist\n";
    char buf[512];
    for (const auto& r : d.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.M, r.E, r.P, r.H, r.V,
                      r.J, r.orbit_dist);
        os << buf;
    }
}

namespace {
template <class T>
void put(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little, "snapshot writer assumes a little-endian host");
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw ValidationError("truncated snapshot");
    return v;
}
}  // namespace

void write_snapshot(std::ostream& os, const FieldState& s) {
    os.write("NLSSNAP1", 8);
    put<std::int32_t>(os, s.grid.d);
    put<std::int32_t>(os, s.grid.N);
    put<double>(os, s.grid.L);
    put<double>(os, s.t);
    for (int j = 0; j < 2; ++j)
        for (const auto& z : s.u[j]) put<double>(os, z.real()), put<double>(os, z.imag());
}

FieldState read_snapshot(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "NLSSNAP1", 8) != 0) throw ValidationError("not a snapshot file");
    Grid g;
    g.d = get<std::int32_t>(is);
    g.N = get<std::int32_t>(is);
    g.L = get<double>(is);
    FieldState s = FieldState::zeros(g);
    s.t = get<double>(is);
    for (int j = 0; j < 2; ++j)
        for (auto& z : s.u[j]) {
            const double re = get<double>(is);
            z = cplx(re, get<double>(is));
        }
    return s;
}

std::vector<cplx> band_limited_field(const Spectral& sp, std::uint64_t seed, double kmax) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01;
    std::vector<cplx> fh(sp.k2().size()), f;
    for (std::size_t i = 0; i < fh.size(); ++i)
        fh[i] = sp.k2()[i] <= kmax * kmax ? cplx(N01(rng), N01(rng)) : cplx(0.0);
    sp.backward(fh, f);
    const double nrm = std::sqrt(l2sq(sp.grid(), f));
    for (auto& z : f) z /= nrm;
    return f;
}

GNSweep gn_sweep(const GForm& g, const Grid& grid, int samples, std::uint64_t seed) {
    grid.validate();
    GNSweep out;
    const double p = g.degree();
    const int d = grid.d;
    out.C = gn_constant(g_minimum(g), d, p, solve_Q(d, p).l2sq);
    Spectral sp(grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        FieldState s = FieldState::zeros(grid);
        const double kmax = 1 + 3 * U(rng);
        if (i % 2 == 0) {
            const double nu = std::acos(std::sqrt(U(rng))), ze = 2 * kPi * U(rng);
            const CPair w = SphereChart::point(nu, ze);
            const auto f = band_limited_field(sp, rng(), kmax);
            for (int j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < f.size(); ++k) s.u[j][k] = w[j] * f[k];
        } else {
            for (int j = 0; j < 2; ++j) {
                const double c = U(rng);
                s.u[j] = band_limited_field(sp, rng(), kmax);
                for (auto& z : s.u[j]) z *= c;
            }
        }
        if (U(rng) < 0.5) {
            // localized samples get much closer to the extremal ratio
            const double w2 = std::pow(0.5 + 2.5 * U(rng), 2);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const auto x = grid.point(k);
                const double e = std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2 * w2));
                s.u[0][k] *= e, s.u[1][k] *= e;
            }
        }
        const auto f = functionals(s, g, 1.0, sp, g.gauge());
        const double r = gn_ratio(f, d, p) / out.C;
        out.max_ratio = std::max(out.max_ratio, r);
        if (r > 1 + 1e-9) ++out.violations;
        ++out.samples;
    }
    return out;
}

namespace {

DiagRow diag_row(const FieldState& s, const GForm& g, double omega, std::array<int, 2> n, double R, const Spectral& sp) {
    const auto f = functionals(s, g, omega, sp, n);
    DiagRow r;
    r.t = s.t;
    r.M = f.M;
    r.E = f.E;
    r.P = f.P.empty() ? 0.0 : f.P[0];
    r.H = f.H;
    r.V = f.V;
    r.J = localized_virial(s, g, n, R, sp).J;
    return r;
}

void drifts(Diagnostics& d) {
    if (d.rows.empty()) return;
    const auto& r0 = d.rows.front();
    for (const auto& r : d.rows) {
        d.mass_drift = std::max(d.mass_drift, std::abs(r.M - r0.M) / std::max(std::abs(r0.M), 1e-300));
        d.energy_drift = std::max(d.energy_drift, std::abs(r.E - r0.E) / std::max(std::abs(r0.E), 1e-300));
    }
}

double sup_diff(const FieldState& a, const FieldState& b) {
    double m = 0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < a.u[j].size(); ++i) m = std::max(m, std::abs(a.u[j][i] - b.u[j][i]));
    return m;
}

bool has_free_phase(const GForm& g) {
    for (const auto& set : minimizing_sets(g))
        if (set.kind == OrbitKind::FreePhase || set.kind == OrbitKind::WholeSphere) return true;
    return false;
}

}  // namespace

Diagnostics stability_experiment(const GForm& g, int d, double omega, double eps, Perturbation kind,
                                 const RunOptions& opt) {
    Grid grid = opt.grid;
    grid.d = d;
    const auto n = g.gauge();
    const auto orbit = build_ground_states(g, d, omega);
    const bool free = has_free_phase(g);
    SplitStep ss(g, n, grid, opt.order);
    const Spectral& sp = ss.spectral();
    FieldState s = orbit.front().sample(grid);
    if (kind == Perturbation::Scale) {
        for (auto& u : s.u)
            for (auto& z : u) z *= 1 + eps;
    } else {
        double phi_h1 = 0, del_h1 = 0;
        std::array<std::vector<cplx>, 2> del;
        for (int j = 0; j < 2; ++j) {
            phi_h1 += l2sq(grid, s.u[j]) + sp.grad_sq(s.u[j]);
            del[j] = band_limited_field(sp, opt.seed + j, 4.0);
            del_h1 += l2sq(grid, del[j]) + sp.grad_sq(del[j]);
        }
        const double amp = eps * std::sqrt(phi_h1 / del_h1);
        for (int j = 0; j < 2; ++j)
            for (std::size_t i = 0; i < del[j].size(); ++i) s.u[j][i] += amp * del[j][i];
    }
    Diagnostics out;
    const long steps = std::lround(opt.T / opt.dt);
    for (long k = 0;; ++k) {
        if (k % opt.sample_every == 0 || k == steps) {
            DiagRow r = diag_row(s, g, omega, n, opt.R, sp);
            r.orbit_dist = orbit_distance(s, orbit, n, free, sp);
            out.max_orbit_dist = std::max(out.max_orbit_dist, r.orbit_dist);
            out.rows.push_back(r);
        }
        if (k == steps) break;
        ss.step(s, opt.dt);
        s.t = (k + 1) * opt.dt;
    }
    out.stop_reason = "completed";
    drifts(out);
    out.final_state = std::move(s);
    return out;
}

Diagnostics soliton_experiment(const GForm& g, int d, double omega, const RunOptions& opt) {
    Grid grid = opt.grid;
    grid.d = d;
    const auto n = g.gauge();
    const auto orbit = build_ground_states(g, d, omega);
    const bool free = has_free_phase(g);
    SplitStep ss(g, n, grid, opt.order);
    const Spectral& sp = ss.spectral();
    FieldState s = orbit.front().sample(grid);
    Diagnostics out;
    const long steps = std::lround(opt.T / opt.dt);
    for (long k = 0;; ++k) {
        if (k % opt.sample_every == 0 || k == steps) {
            DiagRow r = diag_row(s, g, omega, n, opt.R, sp);
            r.orbit_dist = orbit_distance(s, orbit, n, free, sp);
            out.max_orbit_dist = std::max(out.max_orbit_dist, r.orbit_dist);
            out.max_error = std::max(out.max_error, sup_diff(s, standing_wave_solution(orbit.front(), n, s.t, grid)));
            out.rows.push_back(r);
        }
        if (k == steps) break;
        ss.step(s, opt.dt);
        s.t = (k + 1) * opt.dt;
    }
    out.stop_reason = "completed";
    drifts(out);
    out.final_state = std::move(s);
    return out;
}

Diagnostics pseudoconformal_experiment(const GForm& g, double omega, double b, double t_end, const RunOptions& opt) {
    Grid grid = opt.grid;
    if (grid.d != 2) throw ValidationError("pseudo-conformal experiment runs in d = 2");
    if (!(t_end < b * b)) throw ValidationError("t_end must stay below b^2");
    const auto n = g.gauge();
    if (n[0] != n[1]) throw ValidationError("pseudo-conformal experiment needs equal gauge weights");
    const auto orbit = build_ground_states(g, 2, omega);
    SplitStep ss(g, n, grid, opt.order);
    const Spectral& sp = ss.spectral();
    FieldState s = pseudo_conformal_blowup(orbit.front(), b, 0, grid);
    Diagnostics out;
    const long steps = std::lround(t_end / opt.dt);
    for (long k = 0;; ++k) {
        if (k % opt.sample_every == 0 || k == steps) {
            const FieldState ex = pseudo_conformal_blowup(orbit.front(), b, s.t, grid);
            DiagRow r = diag_row(s, g, omega, n, opt.R, sp);
            const double Hex = functionals(ex, g, omega, sp, n).H;
            double num = 0, den = 0;
            for (int j = 0; j < 2; ++j) {
                std::vector<cplx> e(s.u[j].size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.u[j][i] - ex.u[j][i];
                num += l2sq(grid, e) + sp.grad_sq(e);
                den += l2sq(grid, ex.u[j]) + sp.grad_sq(ex.u[j]);
            }
            r.orbit_dist = std::sqrt(num / den);
            out.max_orbit_dist = std::max(out.max_orbit_dist, r.orbit_dist);
            out.max_error = std::max(out.max_error, std::abs(r.H - Hex) / std::abs(Hex));
            out.rows.push_back(r);
        }
        if (k == steps) break;
        ss.step(s, opt.dt);
        s.t = (k + 1) * opt.dt;
    }
    out.stop_reason = "completed";
    drifts(out);
    out.final_state = std::move(s);
    return out;
}

Diagnostics blowup_experiment(const GForm& g, double omega, double c, double eps, const RunOptions& opt) {
    Grid grid = opt.grid;
    const auto n = g.gauge();
    const auto orbit = build_ground_states(g, grid.d, omega);
    SplitStep ss(g, n, grid, opt.order);
    const Spectral& sp = ss.spectral();
    const auto& phi = orbit.front();
    FieldState s = phi.sample(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.point(i);
        const double bump = eps * std::exp(-(x[0] * x[0] + x[1] * x[1]));
        for (int j = 0; j < 2; ++j) s.u[j][i] = c * s.u[j][i] + bump * phi.w[j];
    }
    auto peak = [&] {
        double m = 0;
        for (const auto& u : s.u)
            for (const auto& z : u) m = std::max(m, std::abs(z));
        return m;
    };
    const double peak0 = peak();
    Diagnostics out;
    out.stop_reason = "time limit";
    for (long k = 0;; ++k) {
        if (k % opt.sample_every == 0) {
            out.rows.push_back(diag_row(s, g, omega, n, opt.R, sp));
            const double nyq = std::max(nyquist_fraction(sp, s.u[0]), nyquist_fraction(sp, s.u[1]));
            if (peak() >= 50 * peak0 || nyq > 0.1) {
                out.blowup_signature = true;
                out.stop_reason = "blowup signature";
                break;
            }
        }
        if (s.t >= opt.Tmax_blowup) break;
        ss.step(s, opt.dt);
        s.t = (k + 1) * opt.dt;
    }
    drifts(out);
    out.final_state = std::move(s);
    return out;
}

}  // namespace nlss
