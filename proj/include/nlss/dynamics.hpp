#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlss/field.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/system_model.hpp"

namespace nlss {

// Strang splitting for (i d/dt + n_j Laplacian) u_j = n_j F_j(u):
// half nonlinear kick, full spectral drift, half kick.
class SplitStep {
public:
    // order 2: plain Strang; order 4: triple-jump composition of Strang steps
    SplitStep(const GForm& g, std::array<int, 2> n, const Grid& grid, int order = 2);

    void step(FieldState& s, double dt);
    int order() const { return order_; }
    const Spectral& spectral() const { return sp_; }
    bool exact_kick() const { return diag_; }

private:
    void kick(FieldState& s, double tau) const;
    void drift(FieldState& s, double dt);
    void strang(FieldState& s, double dt);

    GForm g_;
    std::array<int, 2> n_;
    Spectral sp_;
    bool diag_ = false;
    double c_[4] = {0, 0, 0, 0};  // lambda entries of the diagonal case
    int order_ = 2;
    struct Prop {
        double dt;
        std::array<std::vector<cplx>, 2> f;
    };
    std::vector<Prop> props_;
};

// one step with a temporary integrator
void step(FieldState& s, const SystemSpec& spec, double dt);

FieldState standing_wave_solution(const VectorProfile& v, std::array<int, 2> n, double t, const Grid& grid);
// exact mass-critical blowup solution, singular at t = b^2
FieldState pseudo_conformal_blowup(const VectorProfile& v, double b, double t, const Grid& grid);

// chi_0 and derivatives 0..4: s^2 on [0,1], piecewise polynomial (C^6), constant for s >= 2
std::array<double, 5> chi0(double s);

struct VirialPair {
    double J = 0;
    double Jprime_rhs = 0;
};

VirialPair localized_virial(const FieldState& s, const GForm& g, std::array<int, 2> n, double R, const Spectral& sp);

// inf over translations and phases of the H^1 distance to the orbits of the given profiles
double orbit_distance(const FieldState& s, const std::vector<VectorProfile>& orbit, std::array<int, 2> n,
                      bool free_phases, const Spectral& sp);

struct DiagRow {
    double t = 0, M = 0, E = 0, P = 0, H = 0, V = 0, J = 0, orbit_dist = 0;
};

struct Diagnostics {
    std::vector<DiagRow> rows;
    std::string stop_reason;  // "completed" | "blowup signature" | ...
    bool blowup_signature = false;
    double max_orbit_dist = 0;
    double max_error = 0;  // against an exact solution, when the experiment has one
    double mass_drift = 0, energy_drift = 0;  // max relative drift over the rows
    FieldState final_state;
};

void write_csv(std::ostream& os, const Diagnostics& d);
// little-endian: "NLSSNAP1", int32 d, int32 N, f64 L, f64 t, then u1, u2 as interleaved re/im f64
void write_snapshot(std::ostream& os, const FieldState& s);
FieldState read_snapshot(std::istream& is);

// band-limited complex Gaussian field, |k| <= kmax, unit L^2 norm
std::vector<cplx> band_limited_field(const Spectral& sp, std::uint64_t seed, double kmax);

struct GNSweep {
    int samples = 0;
    int violations = 0;     // ratio above 1 + 1e-9
    double C = 0;           // sharp constant
    double max_ratio = 0;   // max of -G / (C M^alpha H^beta)
};

// seeded band-limited random fields: half scalar-type (random unit w times one field), half independent components
GNSweep gn_sweep(const GForm& g, const Grid& grid, int samples, std::uint64_t seed);

enum class Perturbation { Scale, Random };

struct RunOptions {
    Grid grid{1, 1024, 20};
    double dt = 1e-3;
    double T = 10;
    int sample_every = 100;  // steps between diagnostics rows
    int order = 2;
    std::uint64_t seed = 1;
    double R = 4;            // virial localization radius
    double Tmax_blowup = 20;
};

// evolve Phi(1+eps) (Scale) or Phi + delta with a random band-limited delta, |delta|_{H^1} = eps |Phi|_{H^1}
// (Random), tracking the orbit distance
Diagnostics stability_experiment(const GForm& g, int d, double omega, double eps, Perturbation kind,
                                 const RunOptions& opt);
// the ground state propagated and compared with e^{i n_j omega t} Phi_j (max_error = sup-norm error)
Diagnostics soliton_experiment(const GForm& g, int d, double omega, const RunOptions& opt);
// exact blowup solution from t = 0 to t_end (d = 2, p = 4); orbit_dist column holds the relative H^1 distance to
// the formula, max_error the largest relative mismatch of H
Diagnostics pseudoconformal_experiment(const GForm& g, double omega, double b, double t_end, const RunOptions& opt);
// c * Phi + eps * exp(-|x|^2): stops at peak x50 or Nyquist fraction > 10%
Diagnostics blowup_experiment(const GForm& g, double omega, double c, double eps, const RunOptions& opt);

}  // namespace nlss
