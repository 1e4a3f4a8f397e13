#pragma once

// Small derivative-free optimizers shared by the sphere oracle and the classifier.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace nlss::detail {

struct NMResult {
    std::vector<double> x;
    double f;
    int iters;
};

inline NMResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                            double step, double xtol = 1e-12, double ftol = 0.0, int max_iter = 4000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> s(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(s[i]);
    std::vector<std::size_t> idx(n + 1);
    int it = 0;
    for (; it < max_iter; ++it) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const auto b = idx[0], w = idx[n], sw = idx[n - 1];
        double diam = 0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(s[idx[i]][k] - s[b][k]));
        if (diam < xtol || (ftol > 0 && fv[w] - fv[b] <= ftol)) break;
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) c[k] += s[idx[i]][k] / n;
        auto along = [&](double t) {
            std::vector<double> y(n);
            for (std::size_t k = 0; k < n; ++k) y[k] = c[k] + t * (s[w][k] - c[k]);
            return y;
        };
        auto xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fv[b]) {
            auto xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) s[w] = xe, fv[w] = fe;
            else s[w] = xr, fv[w] = fr;
        } else if (fr < fv[sw]) {
            s[w] = xr, fv[w] = fr;
        } else {
            auto xc = fr < fv[w] ? along(-0.5) : along(0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[w])) {
                s[w] = xc, fv[w] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    auto& y = s[idx[i]];
                    for (std::size_t k = 0; k < n; ++k) y[k] = s[b][k] + 0.5 * (y[k] - s[b][k]);
                    fv[idx[i]] = f(y);
                }
            }
        }
    }
    const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
    return {s[best], fv[best], it};
}

// Maximizer of a unimodal function on [a,b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && b - a > tol; ++i) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a), fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a), fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Root of f on [a,b] with f(a), f(b) of opposite sign (or zero).
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    double fa = f(a);
    if (fa == 0) return a;
    for (int i = 0; i < iters; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0) return m;
        if ((fm < 0) == (fa < 0)) a = m, fa = fm;
        else b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace nlss::detail
