#include "nlss/scalar_profile.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlss {

double sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2 * kPi;
        case 3: return 4 * kPi;
        default: throw ValidationError("dimension must be 1, 2 or 3");
    }
}

namespace {

void check_dp(int d, double p) {
    if (d < 1 || d > 3) throw ValidationError("profiles are available for d = 1, 2, 3");
    if (!(p > 2)) throw ValidationError("p must exceed 2");
    if (d == 3 && !(p < 6)) throw ValidationError("p must be below 6 in d = 3");
}

// d = 1 closed form Q(x) = (p/2)^{1/(p-2)} sech^{2/(p-2)}((p-2)x/2)
double q1(double x, double p) {
    const double b = (p - 2) / 2;
    return std::pow(p / 2, 1 / (p - 2)) * std::pow(1 / std::cosh(b * x), 2 / (p - 2));
}
double dq1(double x, double p) { return -q1(x, p) * std::tanh((p - 2) / 2 * x); }

// decaying solution of the linearized equation, and its derivative
double tail(int d, double r) {
    if (d == 2) return std::cyl_bessel_k(0.0, r);
    return std::exp(-r) / r;
}
double dtail(int d, double r) {
    if (d == 2) return -std::cyl_bessel_k(1.0, r);
    return -std::exp(-r) * (1 / r + 1 / (r * r));
}

enum class Fate { Over, Under, Undecided };

struct Shot {
    std::vector<double> Q, dQ;
    Fate fate;
};

Shot shoot(int d, double p, double Q0, double dr, int n, bool keep) {
    Shot s;
    if (keep) s.Q.assign(n, 0.0), s.dQ.assign(n, 0.0);
    auto rhs = [&](double r, double q, double v, double& dq, double& dv) {
        dq = v;
        dv = -(d - 1) / r * v + q - std::pow(std::abs(q), p - 2) * q;
    };
    const double c = (Q0 - std::pow(Q0, p - 1)) / (2 * d);
    // next series coefficient: Q = Q0 + c r^2 + e r^4
    const double e = c * (1 - (p - 1) * std::pow(Q0, p - 2)) / (4 * (d + 2));
    double q = Q0 + c * dr * dr + e * std::pow(dr, 4), v = 2 * c * dr + 4 * e * std::pow(dr, 3);
    if (keep) s.Q[0] = Q0, s.dQ[0] = 0, s.Q[1] = q, s.dQ[1] = v;
    s.fate = Fate::Undecided;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = i * dr, h = dr;
        double k1q, k1v, k2q, k2v, k3q, k3v, k4q, k4v;
        rhs(r, q, v, k1q, k1v);
        rhs(r + h / 2, q + h / 2 * k1q, v + h / 2 * k1v, k2q, k2v);
        rhs(r + h / 2, q + h / 2 * k2q, v + h / 2 * k2v, k3q, k3v);
        rhs(r + h, q + h * k3q, v + h * k3v, k4q, k4v);
        q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (keep) s.Q[i + 1] = q, s.dQ[i + 1] = v;
        if (q < 0) {
            s.fate = Fate::Over;
            if (!keep) return s;
            break;
        }
        if (v > 0) {
            s.fate = Fate::Under;
            if (!keep) return s;
            break;
        }
    }
    return s;
}

double trapezoid_radial(int d, double dr, const std::vector<double>& r, const std::vector<double>& f) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
        s += w * f[i] * std::pow(r[i], d - 1);
    }
    return sphere_area(d) * s * dr;
}

void compute_norms(ScalarProfile& P) {
    if (P.closed_form) {
        // trapezoid on a long symmetric interval: spectrally accurate for sech-type profiles
        const double k = P.wavenumber(), A = P.amplitude();
        const double h = 1e-3 / k, L = 60 / k;
        const int n = static_cast<int>(L / h);
        double m = 0, g = 0, l = 0;
        for (int i = -n; i <= n; ++i) {
            const double x = i * h;
            const double q = A * q1(k * x, P.p), dq = A * k * dq1(k * x, P.p);
            m += q * q, g += dq * dq, l += std::pow(q, P.p);
        }
        P.l2sq = m * h, P.grad_sq = g * h, P.lp = l * h;
        return;
    }
    std::vector<double> f(P.Q.size()), gsq(P.Q.size()), lp(P.Q.size());
    for (std::size_t i = 0; i < P.Q.size(); ++i) {
        f[i] = P.Q[i] * P.Q[i];
        gsq[i] = P.dQ[i] * P.dQ[i];
        lp[i] = std::pow(std::abs(P.Q[i]), P.p);
    }
    P.l2sq = trapezoid_radial(P.d, P.dr, P.r, f);
    P.grad_sq = trapezoid_radial(P.d, P.dr, P.r, gsq);
    P.lp = trapezoid_radial(P.d, P.dr, P.r, lp);
}

}  // namespace

double ScalarProfile::amplitude() const { return std::pow(omega / a, 1 / (p - 2)); }
double ScalarProfile::wavenumber() const { return std::sqrt(omega); }

double ScalarProfile::operator()(double x) const {
    x = std::abs(x);
    const double A = amplitude(), k = wavenumber();
    if (closed_form) return A * q1(k * x, p);
    const std::size_t n = Q.size();
    if (x >= r.back()) return A * tail_C * tail(d, k * x);
    std::size_t i = static_cast<std::size_t>(x / dr);
    if (i + 1 >= n) i = n - 2;
    const double t = (x - r[i]) / dr;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * Q[i] + h10 * dr * dQ[i] + h01 * Q[i + 1] + h11 * dr * dQ[i + 1];
}

double ScalarProfile::derivative(double x) const {
    const double sgn = x < 0 ? -1 : 1;
    x = std::abs(x);
    const double A = amplitude(), k = wavenumber();
    if (closed_form) return sgn * A * k * dq1(k * x, p);
    if (x >= r.back()) return sgn * A * k * tail_C * dtail(d, k * x);
    std::size_t i = static_cast<std::size_t>(x / dr);
    if (i + 1 >= Q.size()) i = Q.size() - 2;
    const double t = (x - r[i]) / dr;
    const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1, d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
    return sgn * ((d00 * Q[i] + d01 * Q[i + 1]) / dr + d10 * dQ[i] + d11 * dQ[i + 1]);
}

double ScalarProfile::scale_of(double qmax, double lapmax, bool term_scaled) const {
    if (!term_scaled) return qmax;
    return std::max({lapmax, omega * qmax, a * std::pow(qmax, p - 1)});
}

double ScalarProfile::elliptic_residual() const { return residual_impl(true); }
double ScalarProfile::elliptic_residual_raw() const { return residual_impl(false); }

double ScalarProfile::residual_impl(bool term_scaled) const {
    double qmax = 0, res = 0, lapmax = 0;
    if (closed_form) {
        // spectral second derivative on a periodic box
        const int N = 4096;
        const double L = 40 / wavenumber(), h = 2 * L / N;
        fftw_complex* buf = fftw_alloc_complex(N);
        fftw_plan fw = fftw_plan_dft_1d(N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_plan bw = fftw_plan_dft_1d(N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        std::vector<double> q(N);
        for (int i = 0; i < N; ++i) {
            q[i] = (*this)(-L + i * h);
            buf[i][0] = q[i];
            buf[i][1] = 0;
        }
        fftw_execute(fw);
        for (int i = 0; i < N; ++i) {
            const int m = i <= N / 2 ? i : i - N;
            const double xi = kPi * m / L;
            buf[i][0] *= -xi * xi / N;
            buf[i][1] *= -xi * xi / N;
        }
        fftw_execute(bw);
        const double lim = R_match > 0 ? R_match : 15 / wavenumber();
        for (int i = 0; i < N; ++i) {
            const double x = -L + i * h;
            qmax = std::max(qmax, q[i]);
            if (std::abs(x) > lim) continue;
            const double e = -buf[i][0] + omega * q[i] - a * std::pow(q[i], p - 1);
            res = std::max(res, std::abs(e));
            lapmax = std::max(lapmax, std::abs(buf[i][0]));
        }
        fftw_destroy_plan(fw);
        fftw_destroy_plan(bw);
        fftw_free(buf);
        return res / scale_of(qmax, lapmax, term_scaled);
    }
    const std::size_t n = Q.size();
    for (std::size_t i = 0; i + 1 < n && r[i] <= R_match; ++i) {
        qmax = std::max(qmax, Q[i]);
        double lap;
        if (i == 0) lap = d * 2 * (Q[1] - Q[0]) / (dr * dr);
        else lap = (Q[i + 1] - 2 * Q[i] + Q[i - 1]) / (dr * dr) + (d - 1) / r[i] * (Q[i + 1] - Q[i - 1]) / (2 * dr);
        res = std::max(res, std::abs(-lap + omega * Q[i] - a * std::pow(Q[i], p - 1)));
        lapmax = std::max(lapmax, std::abs(lap));
    }
    return res / scale_of(qmax, lapmax, term_scaled);
}

ScalarProfile solve_Q(int d, double p, const GridParams& grid) {
    check_dp(d, p);
    if (!(grid.dr > 0) || !(grid.R_max > 10 * grid.dr)) throw ValidationError("invalid radial grid");
    ScalarProfile P;
    P.d = d;
    P.p = p;
    P.dr = grid.dr;
    const int n = static_cast<int>(std::lround(grid.R_max / grid.dr)) + 1;
    P.r.resize(n);
    for (int i = 0; i < n; ++i) P.r[i] = i * grid.dr;
    if (d == 1) {
        P.closed_form = true;
        P.Q0 = q1(0, p);
        P.Q.resize(n);
        P.dQ.resize(n);
        for (int i = 0; i < n; ++i) P.Q[i] = q1(P.r[i], p), P.dQ[i] = dq1(P.r[i], p);
        P.R_match = 0.75 * grid.R_max;
        compute_norms(P);
        return P;
    }
    // bracket: Q0 slightly above 1 undershoots, large Q0 crosses zero
    double lo = 1.0 + 1e-6, hi = 2.0;
    std::ostringstream tr;
    tr.precision(17);
    if (shoot(d, p, lo, grid.dr, n, false).fate != Fate::Under) {
        P.bracket_trace.push_back("lower end Q0=1 does not undershoot");
        throw ConvergenceError("shooting: no bracket (lower end)");
    }
    int grow = 0;
    while (shoot(d, p, hi, grid.dr, n, false).fate != Fate::Over) {
        tr.str("");
        tr << "expand hi=" << hi;
        P.bracket_trace.push_back(tr.str());
        lo = hi;
        hi *= 2;
        if (++grow > 40) throw ConvergenceError("shooting: no bracket (upper end), trace: " + tr.str());
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const auto f = shoot(d, p, mid, grid.dr, n, false).fate;
        if (f == Fate::Over) hi = mid;
        else lo = mid;  // Under, or undecided on the whole grid
        tr.str("");
        tr << "[" << lo << ", " << hi << "]";
        P.bracket_trace.push_back(tr.str());
    }
    P.Q0 = lo;
    Shot a = shoot(d, p, lo, grid.dr, n, true);
    Shot b = shoot(d, p, hi, grid.dr, n, true);
    // trust the trajectory until the bracket ends separate
    int im = static_cast<int>(0.75 * (n - 1));
    for (int i = 1; i < im; ++i)
        if (std::abs(a.Q[i] - b.Q[i]) > 1e-6 * std::abs(a.Q[i]) || a.Q[i] <= 0 || a.dQ[i] >= 0) {
            im = std::max(1, i - static_cast<int>(1.0 / grid.dr));
            break;
        }
    P.R_match = P.r[im];
    P.tail_C = a.Q[im] / tail(d, P.r[im]);
    P.Q = a.Q;
    P.dQ = a.dQ;
    for (int i = im + 1; i < n; ++i) {
        P.Q[i] = P.tail_C * tail(d, P.r[i]);
        P.dQ[i] = P.tail_C * dtail(d, P.r[i]);
    }
    compute_norms(P);
    return P;
}

ScalarProfile rescale(const ScalarProfile& in, double omega, double a) {
    if (!(omega > 0) || !(a > 0)) throw ValidationError("rescale needs omega > 0 and a > 0");
    ScalarProfile P = in;
    const double A0 = in.amplitude(), k0 = in.wavenumber();
    P.omega = omega;
    P.a = a;
    const double A = P.amplitude(), k = P.wavenumber();
    const double sa = A / A0, sk = k / k0;
    for (std::size_t i = 0; i < P.r.size(); ++i) {
        P.r[i] = in.r[i] / sk;
        P.Q[i] = in.Q[i] * sa;
        P.dQ[i] = in.dQ[i] * sa * sk;
    }
    P.dr = in.dr / sk;
    P.R_match = in.R_match / sk;
    compute_norms(P);
    return P;
}

double radial_integral(const ScalarProfile& prof, const std::vector<double>& f) {
    if (prof.closed_form) {
        // even extension on the stored half-line grid
        double s = 0;
        for (std::size_t i = 0; i < f.size(); ++i) s += (i == 0 ? 0.5 : (i + 1 == f.size() ? 0.5 : 1.0)) * f[i];
        return 2 * s * prof.dr;
    }
    return trapezoid_radial(prof.d, prof.dr, prof.r, f);
}

}  // namespace nlss
