#include "nlss/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nlss/classify.hpp"
#include "nlss/dynamics.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/io.hpp"

namespace nlss {

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
};

struct SystemOpts {
    std::string file, form;
    std::optional<double> alpha, beta, sigma, alpha1, alpha2, alpha3, r, eta, kappa, gamma;
    std::vector<double> lambdas;
    std::optional<int> d;

    void add(CLI::App* c) {
        c->add_option("--system", file, "system JSON file");
        c->add_option("--form", form, "standard form: NLS1..NLS5 or CO");
        c->add_option("--alpha", alpha);
        c->add_option("--beta", beta);
        c->add_option("--sigma", sigma);
        c->add_option("--alpha1", alpha1);
        c->add_option("--alpha2", alpha2);
        c->add_option("--alpha3", alpha3);
        c->add_option("--r", r);
        c->add_option("--eta", eta);
        c->add_option("--kappa", kappa);
        c->add_option("--gamma", gamma);
        c->add_option("--lambdas", lambdas, "12 cubic coefficients")->expected(12)->delimiter(',');
        c->add_option("--d", d, "spatial dimension");
    }

    SystemSpec build(int default_d = 1) const {
        const int dd = d.value_or(default_d);
        const int sources = int(!file.empty()) + int(!form.empty()) + int(!lambdas.empty());
        if (sources == 0) throw ValidationError("give --system, --form or --lambdas");
        if (sources > 1) throw ValidationError("--system, --form and --lambdas are mutually exclusive");
        Json j;
        if (!file.empty()) {
            SystemSpec s = load_system(file);
            if (d) s.d = *d;
            s.validate();
            return s;
        }
        if (!lambdas.empty()) {
            j["lambdas"] = lambdas;
        } else {
            j["standard_form"] = form;
            Json q = Json::object();
            auto put = [&](const char* k, const std::optional<double>& v) {
                if (v) q[k] = *v;
            };
            put("alpha", alpha), put("beta", beta), put("sigma", sigma), put("alpha1", alpha1), put("alpha2", alpha2);
            put("alpha3", alpha3), put("r", r), put("eta", eta), put("kappa", kappa), put("gamma", gamma);
            j["params"] = q;
        }
        j["d"] = dd;
        return system_from_json(j);
    }
};

Json header(const char* command) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    return j;
}

Json set_json(const CriticalSet& s) {
    Json j;
    j["label"] = s.label;
    j["value"] = s.value;
    j["kind"] = to_string(s.kind);
    j["is_minimum"] = s.is_minimum;
    j["existence_condition_satisfied"] = s.exists;
    j["condition"] = s.condition;
    j["provenance"] = s.provenance == Provenance::Analytic ? "analytic" : "numeric";
    Json g = Json::array();
    for (const auto& w : s.generators) g.push_back(to_json(w));
    j["generators"] = g;
    return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    f << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- analyze

void cmd_analyze(const SystemOpts& so, const Globals& gl, std::ostream& out) {
    const SystemSpec spec = so.build();
    const GForm g = spec.nonlinearity();
    const auto T0 = minimizing_sets(g);
    const double gmin = g_minimum(g);
    Json j = header("analyze");
    j["system"] = system_json(spec);
    j["g_min"] = gmin;
    j["ground_state_exists"] = gmin < 0;
    Json t = Json::array();
    for (const auto& s : T0) t.push_back(set_json(s));
    j["T0"] = t;
    Json c = Json::array();
    for (const auto& s : critical_points(g)) c.push_back(set_json(s));
    j["critical_sets"] = c;
    write_text(gl.out, dump_json(j) + "\n", out);
}

// ---- ground-state

void cmd_ground_state(const SystemOpts& so, const Globals& gl, double omega, const std::string& dump,
                      std::ostream& out) {
    if (!(omega > 0)) throw ValidationError("omega must be positive");
    const SystemSpec spec = so.build();
    if (spec.d < 1 || spec.d > 3) throw ValidationError("profiles are built for d = 1, 2, 3");
    const GForm g = spec.nonlinearity();
    const double gmin = g_minimum(g);
    Json j = header("ground-state");
    j["system"] = system_json(spec);
    j["omega"] = omega;
    j["d"] = spec.d;
    j["p"] = spec.p;
    j["g_min"] = gmin;
    if (!(gmin < 0)) throw NoGroundState("g_min >= 0: no ground state");
    const ScalarProfile unit = solve_Q(spec.d, spec.p);
    const auto gs = build_ground_states(g, spec.d, omega);
    Json gens = Json::array();
    for (const auto& v : gs) {
        Json e;
        e["label"] = v.label;
        e["w"] = to_json(v.w);
        gens.push_back(e);
    }
    j["generators"] = gens;
    j["a"] = -gmin;
    j["action"] = action_min(g, spec.d, omega, unit);
    j["C_GN"] = gn_constant(gmin, spec.d, spec.p, unit.l2sq);
    j["C_GN_statement"] = gn_constant_statement(gmin, spec.d, spec.p, unit.l2sq);
    const auto v = stability_verdict(spec.d, spec.p, spec.n);
    Json vj;
    vj["regime"] = to_string(v.regime);
    vj["theorem"] = v.theorem;
    vj["mass_resonance_route"] = v.mass_resonance_route;
    vj["radial_virial_route"] = v.radial_virial_route;
    vj["route_available"] = v.route_available;
    j["verdict"] = vj;
    const auto f = functionals(gs.front(), g, omega);
    Json fj;
    fj["M"] = f.M, fj["H"] = f.H, fj["G"] = f.G, fj["E"] = f.E, fj["S"] = f.S, fj["K"] = f.K, fj["V"] = f.V;
    j["functionals"] = fj;
    Json res = Json::array();
    bool all = true;
    for (const auto& s : gs) {
        const auto rep = verify_excited(g, s.w, s.a, spec.d, omega);
        Json r;
        r["label"] = s.label;
        r["lagrange_residual"] = rep.lagrange_residual;
        r["chart_gradient"] = rep.chart_gradient;
        r["elliptic_residual"] = rep.elliptic_residual;
        r["pass"] = rep.pass;
        all = all && rep.pass;
        res.push_back(r);
    }
    j["residuals"] = res;
    if (!dump.empty()) {
        std::ostringstream csv;
        csv << "r,u1_re,u1_im,u2_re,u2_im\n";
        const auto& phi = gs.front();
        for (std::size_t i = 0; i < phi.prof.r.size(); ++i) {
            const CPair z = phi.at(phi.prof.r[i]);
            csv << fmt(phi.prof.r[i]) << ',' << fmt(z[0].real()) << ',' << fmt(z[0].imag()) << ',' << fmt(z[1].real())
                << ',' << fmt(z[1].imag()) << '\n';
        }
        write_text(dump, csv.str(), out);
        j["profile_csv"] = dump;
    }
    write_text(gl.out, dump_json(j) + "\n", out);
    if (!all) throw ConvergenceError("a ground state failed verification");
}

// ---- profile

void cmd_profile(const Globals& gl, int d, double p, double omega, double a, double dr, double rmax,
                 std::ostream& out) {
    if (d < 1 || d > 3) throw ValidationError("profiles are built for d = 1, 2, 3");
    if (!(omega > 0) || !(a > 0)) throw ValidationError("omega and a must be positive");
    GridParams gp;
    gp.dr = dr;
    gp.R_max = rmax;
    const ScalarProfile unit = solve_Q(d, p, gp);
    const ScalarProfile q = rescale(unit, omega, a);
    std::ostringstream csv;
    csv << "r,Q\n";
    for (std::size_t i = 0; i < q.r.size(); ++i) csv << fmt(q.r[i]) << ',' << fmt(q.Q[i]) << '\n';
    if (gl.format == "csv") {
        write_text(gl.out, csv.str(), out);
        return;
    }
    Json j = header("profile");
    j["d"] = d, j["p"] = p, j["omega"] = omega, j["a"] = a;
    j["closed_form"] = unit.closed_form;
    j["Q0"] = unit.Q0;
    j["amplitude"] = q.amplitude();
    j["R_match"] = q.R_match;
    // norms of the unit profile (-Q'' - (d-1)/r Q' + Q = Q^{p-1})
    Json n;
    n["l2sq"] = unit.l2sq, n["grad_sq"] = unit.grad_sq, n["lp"] = unit.lp;
    j["unit_norms"] = n;
    Json po;
    po["nehari"] = (unit.grad_sq + unit.l2sq - unit.lp) / unit.lp;
    po["pohozaev"] = ((d - 2) / 2.0 * unit.grad_sq + d / 2.0 * unit.l2sq - d / p * unit.lp) / unit.lp;
    j["identity_defects"] = po;
    j["elliptic_residual"] = q.elliptic_residual();
    j["elliptic_residual_raw"] = q.elliptic_residual_raw();
    if (!gl.out.empty()) {
        write_text(gl.out, csv.str(), out);
        j["csv"] = gl.out;
    }
    out << dump_json(j) << "\n";
}

// ---- simulate

struct SimOpts {
    std::string experiment = "soliton";
    int N = 0;
    double L = 20, dt = 1e-3, T = 10, omega = 1, eps = 0.01, c = 1.05, b = 3, R = 4, t_end = -1;
    int order = 2, sample_every = 100;
    std::string perturbation = "scale", snapshot;
};

void cmd_simulate(const SystemOpts& so, const Globals& gl, const SimOpts& o, std::ostream& out) {
    const SystemSpec spec = so.build();
    const GForm g = spec.nonlinearity();
    RunOptions ro;
    ro.grid = Grid{spec.d, o.N > 0 ? o.N : (spec.d == 1 ? 1024 : 256), o.L};
    ro.grid.validate();
    if (!(o.dt > 0) || !(o.T >= 0)) throw ValidationError("dt must be positive and T non-negative");
    if (o.order != 2 && o.order != 4) throw ValidationError("--order is 2 or 4");
    if (o.sample_every < 1) throw ValidationError("--sample-every must be >= 1");
    ro.dt = o.dt, ro.T = o.T, ro.order = o.order, ro.sample_every = o.sample_every, ro.seed = gl.seed, ro.R = o.R;
    ro.Tmax_blowup = o.T;
    Diagnostics d;
    if (o.experiment == "soliton") {
        d = soliton_experiment(g, spec.d, o.omega, ro);
    } else if (o.experiment == "stability") {
        Perturbation k;
        if (o.perturbation == "scale") k = Perturbation::Scale;
        else if (o.perturbation == "random") k = Perturbation::Random;
        else throw ValidationError("--perturbation is scale or random");
        d = stability_experiment(g, spec.d, o.omega, o.eps, k, ro);
    } else if (o.experiment == "blowup") {
        d = blowup_experiment(g, o.omega, o.c, o.eps, ro);
    } else if (o.experiment == "pseudoconformal") {
        d = pseudoconformal_experiment(g, o.omega, o.b, o.t_end > 0 ? o.t_end : 0.5 * o.b * o.b, ro);
    } else {
        throw ValidationError("unknown experiment '" + o.experiment + "'");
    }
    if (!o.snapshot.empty()) {
        std::ofstream f(o.snapshot, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + o.snapshot);
        write_snapshot(f, d.final_state);
    }
    std::ostringstream csv;
    write_csv(csv, d);
    if (gl.format == "csv") {
        write_text(gl.out, csv.str(), out);
        return;
    }
    Json j = header("simulate");
    j["system"] = system_json(spec);
    j["experiment"] = o.experiment;
    Json gj;
    gj["d"] = ro.grid.d, gj["N"] = ro.grid.N, gj["L"] = ro.grid.L;
    j["grid"] = gj;
    j["dt"] = ro.dt;
    j["order"] = ro.order;
    j["seed"] = gl.seed;
    j["stop_reason"] = d.stop_reason;
    j["blowup_signature"] = d.blowup_signature;
    j["max_orbit_dist"] = d.max_orbit_dist;
    j["max_error"] = d.max_error;
    j["mass_drift"] = d.mass_drift;
    j["energy_drift"] = d.energy_drift;
    j["rows"] = d.rows.size();
    double vmax = -INFINITY;
    for (const auto& r : d.rows) vmax = std::max(vmax, r.V);
    j["max_V"] = vmax;
    if (!gl.out.empty()) {
        write_text(gl.out, csv.str(), out);
        j["csv"] = gl.out;
    }
    if (!o.snapshot.empty()) j["snapshot"] = o.snapshot;
    out << dump_json(j) << "\n";
}

// ---- classify

void cmd_classify(const SystemOpts& so, const Globals& gl, std::ostream& out) {
    const SystemSpec spec = so.build();
    if (!spec.lambdas) throw ValidationError("classify needs a cubic system (NLS1-NLS5 or lambdas)");
    const auto mv = lambdas_to_cv(*spec.lambdas);
    const auto rk = rank_and_kernel(mv);
    Json j = header("classify");
    j["system"] = system_json(spec);
    j["rank_C"] = rk.rank;
    Json ker = Json::array();
    for (const auto& v : rk.kernel) ker.push_back(Json::array({v[0], v[1], v[2]}));
    j["kernel_C"] = ker;
    if (rk.admissible) j["admissible_abc"] = Json::array({(*rk.admissible)[0], (*rk.admissible)[1], (*rk.admissible)[2]});
    else j["admissible_abc"] = nullptr;
    const auto m = match_standard_form(spec);
    if (m) {
        Json mj;
        mj["form"] = to_string(m->tag);
        mj["params"] = params_json(m->tag, m->params);
        mj["M"] = to_json(m->M);
        mj["residual"] = m->residual;
        j["match"] = mj;
    } else {
        j["match"] = nullptr;
        j["status"] = "budget exhausted";
    }
    write_text(gl.out, dump_json(j) + "\n", out);
}

// ---- gn-check

void cmd_gn_check(const SystemOpts& so, const Globals& gl, int samples, int N, double L, std::ostream& out) {
    const SystemSpec spec = so.build();
    if (spec.d != 1 && spec.d != 2) throw ValidationError("gn-check runs in d = 1 or 2");
    if (samples < 1) throw ValidationError("--samples must be >= 1");
    const GForm g = spec.nonlinearity();
    const Grid grid{spec.d, N > 0 ? N : (spec.d == 1 ? 256 : 64), L};
    const auto sw = gn_sweep(g, grid, samples, gl.seed);
    const auto gs = build_ground_states(g, spec.d, 1.0);
    const auto f = functionals(gs.front(), g, 1.0);
    Json j = header("gn-check");
    j["system"] = system_json(spec);
    j["d"] = spec.d;
    j["seed"] = gl.seed;
    j["C_GN"] = sw.C;
    j["C_GN_statement"] = gn_constant_statement(g_minimum(g), spec.d, spec.p, solve_Q(spec.d, spec.p).l2sq);
    j["samples"] = sw.samples;
    j["violations"] = sw.violations;
    j["max_ratio"] = sw.max_ratio;
    j["ground_state_ratio"] = gn_ratio(f, spec.d, spec.p) / sw.C;
    write_text(gl.out, dump_json(j) + "\n", out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scalar-type standing waves of coupled cubic NLS systems", "nlss"};
    app.require_subcommand(1);
    Globals gl;
    app.add_option("--seed", gl.seed, "random seed")->capture_default_str();
    app.add_option("--out", gl.out, "output file");
    app.add_option("--format", gl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.fallthrough();

    SystemOpts so;
    auto* analyze = app.add_subcommand("analyze", "minimize g on the unit sphere, list critical sets");
    so.add(analyze);

    double omega = 1;
    std::string dump;
    auto* gs = app.add_subcommand("ground-state", "build and verify ground states");
    so.add(gs);
    gs->add_option("--omega", omega)->capture_default_str();
    gs->add_option("--dump-profile", dump, "per-component CSV of the first ground state");

    int pd = 1;
    double pp = 4, pomega = 1, pa = 1, pdr = 1e-3, prmax = 20;
    auto* prof = app.add_subcommand("profile", "scalar profile Q_{omega,a}");
    prof->add_option("--d", pd)->capture_default_str();
    prof->add_option("--p", pp)->capture_default_str();
    prof->add_option("--omega", pomega)->capture_default_str();
    prof->add_option("--a", pa)->capture_default_str();
    prof->add_option("--dr", pdr)->capture_default_str();
    prof->add_option("--rmax", prmax)->capture_default_str();

    SimOpts sim;
    auto* simc = app.add_subcommand("simulate", "split-step simulation with diagnostics");
    so.add(simc);
    simc->add_option("--experiment", sim.experiment)
        ->check(CLI::IsMember({"soliton", "stability", "blowup", "pseudoconformal"}))
        ->capture_default_str();
    simc->add_option("--grid", sim.N, "points per axis (default 1024 in d=1, 256 in d=2)");
    simc->add_option("--box", sim.L, "half-width of the periodic box")->capture_default_str();
    simc->add_option("--dt", sim.dt)->capture_default_str();
    simc->add_option("--T", sim.T, "final time (time limit for blowup)")->capture_default_str();
    simc->add_option("--omega", sim.omega)->capture_default_str();
    simc->add_option("--eps", sim.eps)->capture_default_str();
    simc->add_option("--perturbation", sim.perturbation, "scale or random")->capture_default_str();
    simc->add_option("--c", sim.c, "inflation factor for blowup")->capture_default_str();
    simc->add_option("--b", sim.b, "pseudo-conformal parameter")->capture_default_str();
    simc->add_option("--t-end", sim.t_end, "pseudo-conformal end time (default b^2/2)");
    simc->add_option("--R", sim.R, "virial localization radius")->capture_default_str();
    simc->add_option("--order", sim.order, "2 or 4")->capture_default_str();
    simc->add_option("--sample-every", sim.sample_every)->capture_default_str();
    simc->add_option("--snapshot", sim.snapshot, "binary snapshot of the final field");

    auto* cls = app.add_subcommand("classify", "match a cubic system to a standard form");
    so.add(cls);

    int samples = 1000, gN = 0;
    double gL = 10;
    auto* gn = app.add_subcommand("gn-check", "sharp Gagliardo-Nirenberg check on random fields");
    so.add(gn);
    gn->add_option("--samples", samples)->capture_default_str();
    gn->add_option("--grid", gN, "points per axis (default 256 in d=1, 64 in d=2)");
    gn->add_option("--box", gL)->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (analyze->parsed()) cmd_analyze(so, gl, out);
        else if (gs->parsed()) cmd_ground_state(so, gl, omega, dump, out);
        else if (prof->parsed()) cmd_profile(gl, pd, pp, pomega, pa, pdr, prmax, out);
        else if (simc->parsed()) cmd_simulate(so, gl, sim, out);
        else if (cls->parsed()) cmd_classify(so, gl, out);
        else if (gn->parsed()) cmd_gn_check(so, gl, samples, gN, gL, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        err << "non-convergence: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace nlss
