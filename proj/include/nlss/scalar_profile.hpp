#pragma once

#include <string>
#include <vector>

#include "nlss/types.hpp"

namespace nlss {

inline double s_p(int d, double p) { return d / 2.0 - d / p; }
inline double s_c(int d, double p) { return d / 2.0 - 2.0 / (p - 2.0); }
// |S^{d-1}| (d = 1 counts the two endpoints)
double sphere_area(int d);

struct GridParams {
    double dr = 1e-3;
    double R_max = 20.0;
};

// Radial profile Q_{omega,a}(r) = (omega/a)^{1/(p-2)} Q(sqrt(omega) r).
struct ScalarProfile {
    int d = 1;
    double p = 4;
    double omega = 1, a = 1;
    double dr = 1e-3;
    std::vector<double> r, Q, dQ;
    double R_match = 0;
    double Q0 = 0;  // Q(0) of the unit profile
    bool closed_form = false;
    double tail_C = 0;  // unit-profile tail amplitude
    double l2sq = 0, grad_sq = 0, lp = 0;
    std::vector<std::string> bracket_trace;

    double amplitude() const;
    double wavenumber() const;
    double operator()(double x) const;
    double derivative(double x) const;
    // sup_{r <= R_match} |-Q'' - (d-1)/r Q' + omega Q - a Q^{p-1}|, divided by the
    // largest of sup|Delta Q|, omega sup|Q|, a sup|Q|^{p-1} (the raw variant divides by sup|Q|)
    double elliptic_residual() const;
    double elliptic_residual_raw() const;

private:
    double residual_impl(bool term_scaled) const;
    double scale_of(double qmax, double lapmax, bool term_scaled) const;
};

ScalarProfile solve_Q(int d, double p, const GridParams& grid = {});
ScalarProfile rescale(const ScalarProfile& unit, double omega, double a);

// integral over R^d of a radial function sampled on the profile grid
double radial_integral(const ScalarProfile& prof, const std::vector<double>& f);

}  // namespace nlss
