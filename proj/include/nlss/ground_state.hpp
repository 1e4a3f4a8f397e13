#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlss/field.hpp"
#include "nlss/scalar_profile.hpp"
#include "nlss/sphere_critical.hpp"

namespace nlss {

// w * Q_{omega,a}(. - y)
struct VectorProfile {
    CPair w{};
    double omega = 1, a = 1;
    ScalarProfile prof;  // already rescaled to (omega, a)
    std::vector<double> y;
    std::string label;
    bool ground = false;

    CPair at(double r) const { return scale(w, prof(r)); }
    // sample on a periodic grid, centred at y
    FieldState sample(const Grid& g) const;
};

VectorProfile make_profile(const CPair& w, double omega, double a, int d, double p, const GridParams& grid = {});
VectorProfile make_profile(const CPair& w, double omega, double a, const ScalarProfile& unit);

struct Functionals {
    double M = 0, H = 0, G = 0, E = 0, S = 0, K = 0, V = 0;
    std::vector<double> P;  // momentum, one entry per axis (gridded fields only)
};

Functionals functionals(const VectorProfile& v, const GForm& g, double omega);
Functionals functionals(const FieldState& s, const GForm& g, double omega, const Spectral& sp,
                        std::array<int, 2> n = {1, 1});
// derived entries from (M, H, G)
Functionals assemble(double M, double H, double G, double omega, int d, double p);

// g_min and T0 generators (analytic tables when available, sphere search otherwise)
double g_minimum(const GForm& g);
std::vector<CriticalSet> minimizing_sets(const GForm& g);

double action_min(double g_min, int d, double p, double omega, double Q_l2sq);
double action_min(const GForm& g, int d, double omega, const ScalarProfile& unit);

std::vector<VectorProfile> build_ground_states(const GForm& g, int d, double omega, const GridParams& grid = {});

struct ExcitedReport {
    double lagrange_residual = 0;
    double chart_gradient = 0;  // |grad h| (0 at chart poles, where only the Lagrange test applies)
    bool critical = false;
    double g_w = 0;
    bool amplitude_ok = false;  // a = -g(w) > 0
    double elliptic_residual = 0;
    bool ground = false;
    bool pass = false;
};

// tol < 0 picks 1e-5 for d <= 2 and 1e-3 for d = 3
ExcitedReport verify_excited(const GForm& g, const CPair& w, double a, int d, double omega, double tol = -1,
                             const GridParams& grid = {});

// -G <= C M^{p/2 - d(p-2)/4} H^{d(p-2)/4}
double gn_constant(double g_min, int d, double p, double Q_l2sq);
// the constant as printed in the theorem statement (differs from the sharp value)
double gn_constant_statement(double g_min, int d, double p, double Q_l2sq);
double gn_ratio(const Functionals& f, int d, double p);  // -G / (M^a H^b)

struct PotentialWell {
    double I3 = 0;
    double ground_HM = 0;  // H(Phi) M(Phi)^{(1-s_c)/s_c}
    double action = 0;     // I(omega)
    double ground_S = 0;   // S_omega(Phi)
};

PotentialWell potential_well(const GForm& g, int d, double omega, const ScalarProfile& unit);
// H M^{(1-s_c)/s_c} and V M^{(1-s_c)/s_c}
double well_HM(const Functionals& f, int d, double p);
double well_VM(const Functionals& f, int d, double p);

enum class Regime { Stable, Unstable };

struct StabilityVerdict {
    Regime regime = Regime::Stable;
    std::string theorem;  // "stability" | "instability"
    bool mass_resonance_route = false;
    bool radial_virial_route = false;
    bool route_available = true;
};

StabilityVerdict stability_verdict(int d, double p, std::array<int, 2> n);
std::string to_string(Regime r);

}  // namespace nlss
