#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlss/system_model.hpp"

namespace nlss {

// (nu, zeta, theta) -> (e^{i theta} cos nu, e^{i(theta+zeta)} sin nu)
struct SphereChart {
    static CPair point(double nu, double zeta, double theta = 0.0);
    // chart coordinates of a unit vector after removing the gauge phase
    static std::pair<double, double> coords(const CPair& w, std::array<int, 2> n);
};

enum class OrbitKind { Point, FreePhase, RealCircle, WholeSphere };
enum class Provenance { Analytic, Numeric };

std::string to_string(OrbitKind k);

struct CriticalSet {
    std::string label;
    std::vector<CPair> generators;  // unit vectors, one per orbit (sigma branches listed)
    OrbitKind kind = OrbitKind::Point;
    double value = 0;
    bool is_minimum = false;
    Provenance provenance = Provenance::Analytic;
    bool exists = true;
    std::string condition;
};

struct TrigSolveResult {
    double rho = 0, tau = 0;
    std::array<std::optional<double>, 4> theta{};
    double rho_star = 0;
    int count = 0;        // distinct roots in [0, 2pi)
    bool merged = false;  // rho == rho_* (double root present)
};

double rho_star(double tau);
TrigSolveResult solve_trig(double rho, double tau);

struct AnalyticMin {
    double g_min = 0;
    std::vector<CriticalSet> T0;
};

AnalyticMin gmin_analytic(const GForm& g);

struct NumericOptions {
    int grid = 2048;
    int seeds = 32;
    double cluster = 1e-6;
};

struct NumericMin {
    double g_min = 0;
    std::vector<CPair> minimizers;                 // one canonical point per orbit
    std::vector<std::pair<double, double>> chart;  // matching (nu, zeta)
    bool degenerate = false;                       // continuum of minimizers
};

NumericMin gmin_numeric(const GForm& g, const NumericOptions& opt = {});

std::vector<CriticalSet> critical_points(const GForm& g);

// ||F(w) - g(w) w|| for unit w: zero iff w is critical on the sphere.
double lagrange_residual(const GForm& g, const CPair& w);
// Gradient of h(nu, zeta) by central differences.
std::array<double, 2> chart_gradient(const GForm& g, double nu, double zeta, double step = 1e-6);

CPair canonicalize(const CPair& w, std::array<int, 2> n);
double orbit_distance(const CPair& a, const CPair& b, std::array<int, 2> n);
double set_distance(const CPair& w, const CriticalSet& s, std::array<int, 2> n);

// Colin-Ohta helpers
double co_kappa_c(double gamma);
bool co_in_J(int m, double gamma, double kappa);
double co_nu(int m, double gamma, double kappa);

}  // namespace nlss
