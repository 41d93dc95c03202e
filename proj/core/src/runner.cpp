#include "cgl/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace cgl {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string series_csv(const Trajectory& traj) {
    std::string out = "t,l2_sq,phi,psi_q,residual\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        out += fmt(traj.times[j]);
        out += ',';
        out += fmt(traj.diag[j].l2_sq);
        out += ',';
        out += fmt(traj.diag[j].phi);
        out += ',';
        out += fmt(traj.diag[j].psi_q);
        out += ',';
        out += fmt(traj.diag[j].residual);
        out += '\n';
    }
    return out;
}

class OutputDir {
  public:
    explicit OutputDir(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& bytes) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << bytes;
        out.close();
        char sum[24];
        std::snprintf(sum, sizeof(sum), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes)));
        files_[name] = {{"bytes", bytes.size()}, {"fnv1a64", sum}};
    }

    void write_manifest(const RunConfig& cfg, const json& summary, double wall_seconds,
                        bool partial) {
        json m;
        m["version"] = CGLAB_VERSION;
        m["scenario"] = cfg.scenario;
        m["config"] = cfg.resolved;
        m["wall_clock_seconds"] = wall_seconds;
        m["partial"] = partial;
        m["summary"] = summary;
        m["files"] = files_;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << m.dump(2) << "\n";
    }

    const fs::path& path() const { return dir_; }

  private:
    fs::path dir_;
    json files_ = json::object();
};

json certificate_json(const SmallDataCertificate& c) {
    return json{{"lambda1", c.lambda1},
                {"delta0", c.delta0},
                {"delta", c.delta},
                {"sobolev_c", c.sobolev_c},
                {"sobolev_c_note", "lower-bound-based empirical estimate"},
                {"eps0", c.eps0},
                {"n1", c.n1},
                {"n2", c.n2},
                {"eps_lambda", c.eps_lambda},
                {"c_eps_lambda", c.c_eps_lambda},
                {"n", c.n_total},
                {"eps1", c.eps1},
                {"default_radius", c.radius},
                {"trials", c.trials},
                {"seed", c.seed}};
}

// ---------------------------------------------------------------------------
// Scenarios

RunResult scenario_simulate(const RunConfig& cfg, OutputDir& out, json& summary) {
    ComplexField u0 = build_initial(cfg);
    Forcing force = build_forcing(cfg);
    RunResult res;
    bool partial = false;
    Trajectory traj;
    try {
        traj = integrate_acgl(u0, cfg.params, force, IntegrateOptions{1});
    } catch (const BlowupSignal& b) {
        partial = true;
        summary["blowup_signal"] = {{"step", b.step}, {"time", b.time}};
        res.exit_code = 1;
        res.summary = "simulate: field blew up at t = " + fmt(b.time);
    }
    if (!partial) {
        out.write("series.csv", series_csv(traj));
        summary["steps"] = traj.times.size() - 1;
        summary["final_phi"] = traj.diag.back().phi;
        summary["final_l2_sq"] = traj.diag.back().l2_sq;
        summary["sup_phi"] = traj.sup_phi();
        res.summary = "simulate: " + std::to_string(traj.times.size() - 1) +
                      " steps, final phi = " + fmt(traj.diag.back().phi);
    }
    summary["partial"] = partial;
    return res;
}

RunResult scenario_fixed_point(const RunConfig& cfg, OutputDir& out, json& summary) {
    ComplexField u0 = build_initial(cfg);
    Forcing force = build_forcing(cfg);
    double s_request = cfg.fp_s_request > 0.0 ? cfg.fp_s_request : cfg.params.horizon;
    FixedPointResult fp = fixed_point_solve(u0, force, s_request, cfg.params,
                                            cfg.tol_fixed_point, cfg.fp_max_iter);
    out.write("series.csv", series_csv(fp.trajectory));
    auto residuals = acgl_residual(fp.trajectory, force, cfg.params);
    double res_sup = 0.0;
    for (double r : residuals) res_sup = std::max(res_sup, r);

    const char* status = fp.report.status == FixedPointReport::Status::converged
                             ? "converged"
                             : fp.report.status == FixedPointReport::Status::ball_escape
                                   ? "ball_escape"
                                   : "non_contractive";
    json rep{{"status", status},
             {"radius", fp.report.radius},
             {"s_horizon", fp.report.s_horizon},
             {"distances", fp.report.distances},
             {"final_residual", fp.report.final_residual},
             {"iterations", fp.report.iterations},
             {"all_iterates_in_ball", fp.report.all_iterates_in_ball},
             {"escape_norm_sq", fp.report.escape_norm_sq},
             {"acgl_residual_sup", res_sup}};
    out.write("fixed_point.json", rep.dump(2) + "\n");
    summary = rep;

    RunResult res;
    res.exit_code = fp.report.converged ? 0 : 1;
    res.summary = std::string("fixed_point: ") + status + " after " +
                  std::to_string(fp.report.iterations) + " sweeps (S = " +
                  fmt(fp.report.s_horizon) + ")";
    return res;
}

json verdict_json(const BlowupVerdict& v) {
    const char* outcome = v.outcome == BlowupVerdict::Outcome::blowup
                              ? "blowup"
                              : v.outcome == BlowupVerdict::Outcome::global_on_horizon
                                    ? "global_on_horizon"
                                    : "inconclusive";
    json j{{"outcome", outcome},
           {"peak_phi", v.peak_phi},
           {"estimates", v.estimates},
           {"refinements", v.refinements}};
    if (v.outcome == BlowupVerdict::Outcome::blowup) j["t_blowup"] = v.t_blowup;
    if (v.defocusing_scenario)
        j["note"] = "defocusing sanity scenario (sign-reversed nonlinearity, outside "
                    "the modeled regime)";
    return j;
}

RunResult scenario_blowup(const RunConfig& cfg, OutputDir& out, json& summary) {
    ComplexField u0 = build_initial(cfg);
    Forcing force = build_forcing(cfg);
    BlowupPolicy policy;
    policy.initial_dt = cfg.params.dt;
    policy.max_refinements = cfg.blowup_max_refinements;
    BlowupVerdict v = detect_blowup(cfg.params, u0, force, cfg.blowup_theta, policy);
    json rep = verdict_json(v);
    out.write("verdict.json", rep.dump(2) + "\n");
    summary = rep;

    RunResult res;
    res.exit_code = v.outcome == BlowupVerdict::Outcome::inconclusive ? 1 : 0;
    res.summary = "blowup: " + rep["outcome"].get<std::string>() +
                  (v.outcome == BlowupVerdict::Outcome::blowup
                       ? " at t = " + fmt(v.t_blowup)
                       : "");
    return res;
}

RunResult scenario_certify(const RunConfig& cfg, OutputDir& out, json& summary) {
    Domain d = cfg.domain();
    SmallDataCertificate cert =
        small_data_certificate(cfg.params, d, cfg.certify_trials, cfg.seed);
    double r = cfg.certify_radius_factor * cert.eps1;

    // First eigenmode scaled to phi(U0) = r^2.
    ComplexField e1 = parse_mode_field(d, d.dimension == 1 ? "1:1:0" : "1x1:1:0");
    ComplexField u0 = scale(r / std::sqrt(phi(e1)), e1);
    Forcing force = build_forcing(cfg);

    MonitorReport rep = monitored_global_run(cfg.params, u0, force, cert, r);
    out.write("certificate.json", certificate_json(rep.certificate).dump(2) + "\n");
    out.write("monitor.csv", series_csv(rep.trajectory));
    json mon{{"passed", rep.passed},
             {"radius", rep.radius},
             {"phi_bound", rep.phi_bound},
             {"max_phi", rep.max_phi},
             {"max_phi_ratio", rep.max_phi_ratio},
             {"blowup_triggered", rep.blowup_triggered},
             {"coercivity_checks", rep.coercivity_checks},
             {"coercivity_failures", rep.coercivity_failures},
             {"reestimated", rep.reestimated},
             {"phi_decreasing", rep.phi_decreasing}};
    out.write("monitor.json", mon.dump(2) + "\n");
    summary = {{"certificate", certificate_json(rep.certificate)}, {"monitor", mon}};

    RunResult res;
    res.exit_code = rep.passed ? 0 : 1;
    res.summary = std::string("certify: ") + (rep.passed ? "pass" : "FAIL") +
                  ", max phi / (N r^2) = " + fmt(rep.max_phi_ratio);
    return res;
}

RunResult scenario_sweep(const RunConfig& cfg, OutputDir& out, json& summary) {
    std::vector<double> kappas =
        cfg.sweep_kappa.empty() ? std::vector<double>{cfg.params.kappa} : cfg.sweep_kappa;
    std::vector<double> amps = cfg.sweep_amplitude.empty()
                                   ? std::vector<double>{cfg.init_amplitude}
                                   : cfg.sweep_amplitude;

    RunConfig base = cfg;
    base.init_amplitude = 1.0;
    ComplexField u_base = build_initial(base);
    Forcing force = build_forcing(cfg);

    struct Cell {
        double kappa, amplitude;
        BlowupVerdict verdict;
    };
    std::vector<Cell> cells;
    for (double k : kappas)
        for (double a : amps) cells.push_back({k, a, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            EvolutionParams p = cfg.params;
            p.kappa = cells[i].kappa;
            ComplexField u0 = scale(cells[i].amplitude, u_base);
            BlowupPolicy policy;
            policy.initial_dt = p.dt;
            policy.max_refinements = cfg.blowup_max_refinements;
            cells[i].verdict = detect_blowup(p, u0, force, cfg.blowup_theta, policy);
        }
    };
    std::size_t n_threads = std::min<std::size_t>(std::max(cfg.threads, 1), cells.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Single collector writes rows in deterministic (kappa, amplitude) order.
    std::string csv = "kappa,amplitude,outcome,t_blowup,peak_phi,refinements\n";
    std::size_t blowups = 0;
    for (const auto& c : cells) {
        const char* outcome = c.verdict.outcome == BlowupVerdict::Outcome::blowup
                                  ? "blowup"
                                  : c.verdict.outcome ==
                                            BlowupVerdict::Outcome::global_on_horizon
                                        ? "global_on_horizon"
                                        : "inconclusive";
        if (c.verdict.outcome == BlowupVerdict::Outcome::blowup) ++blowups;
        csv += fmt(c.kappa);
        csv += ',';
        csv += fmt(c.amplitude);
        csv += ',';
        csv += outcome;
        csv += ',';
        csv += fmt(c.verdict.outcome == BlowupVerdict::Outcome::blowup ? c.verdict.t_blowup
                                                                       : -1.0);
        csv += ',';
        csv += fmt(c.verdict.peak_phi);
        csv += ',';
        csv += std::to_string(c.verdict.refinements);
        csv += '\n';
    }
    out.write("sweep.csv", csv);
    summary = {{"cells", cells.size()}, {"blowups", blowups}};

    RunResult res;
    res.summary = "sweep: " + std::to_string(cells.size()) + " cells, " +
                  std::to_string(blowups) + " blow-ups";
    return res;
}

RunResult scenario_verify(const RunConfig& cfg, OutputDir& out, json& summary) {
    auto checks = run_verify_suite(cfg.verify_fast, cfg.seed);
    std::string table;
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        table += (c.passed ? "PASS  " : "FAIL  ") + c.name +
                 (c.detail.empty() ? "" : "  [" + c.detail + "]") + "\n";
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        all = all && c.passed;
    }
    std::cout << table;
    out.write("verify.json", arr.dump(2) + "\n");
    out.write("verify.txt", table);
    summary = {{"checks", checks.size()}, {"all_passed", all}};

    RunResult res;
    res.exit_code = all ? 0 : 1;
    res.summary = std::string("verify: ") + (all ? "all checks passed" : "FAILURES");
    return res;
}

}  // namespace

RunResult execute(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    OutputDir out(cfg.output_dir);
    json summary = json::object();
    RunResult res;
    bool partial = false;
    try {
        if (cfg.scenario == "simulate") res = scenario_simulate(cfg, out, summary);
        else if (cfg.scenario == "fixed_point") res = scenario_fixed_point(cfg, out, summary);
        else if (cfg.scenario == "blowup") res = scenario_blowup(cfg, out, summary);
        else if (cfg.scenario == "certify") res = scenario_certify(cfg, out, summary);
        else if (cfg.scenario == "sweep") res = scenario_sweep(cfg, out, summary);
        else res = scenario_verify(cfg, out, summary);
        partial = summary.value("partial", false);
    } catch (...) {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        summary["error"] = "scenario aborted";
        out.write_manifest(cfg, summary, wall, true);
        throw;
    }
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.write_manifest(cfg, summary, wall, partial);
    res.output_dir = out.path().string();
    return res;
}

// ---------------------------------------------------------------------------
// Verify suite

namespace {

struct MaxTracker {
    double value = 0.0;
    void track(double v) { value = std::max(value, std::abs(v)); }
};

std::string detail_max(double worst, double tol) {
    return "worst " + fmt(worst) + ", tol " + fmt(tol);
}

VerifyCheck check_imatrix(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 48);
    int n = fast ? 60 : 300;
    const double q = 4.0;
    MaxTracker worst;
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed, 2 * i), 0.8);
        ComplexField v = random_field(d, hash_u64(seed, 2 * i + 1), 0.8);
        double nu = l2_norm(u), nv = l2_norm(v);

        ComplexField ii = apply_i(apply_i(u));
        axpy(1.0, u, ii);  // I^2 U + U = 0
        worst.track(l2_norm(ii) / nu);
        worst.track((l2_norm(apply_i(u)) - nu) / nu);
        worst.track((inner_l2_skew(u, v) + inner_l2_skew(v, u)) / (nu * nv));

        ComplexField gp = grad_phi(u);
        ComplexField gq = grad_psi_r(u, q);
        double ngp = l2_norm(gp) + 1e-300, ngq = l2_norm(gq) + 1e-300;
        worst.track(inner_l2_skew(u, u) / (nu * nu));
        worst.track(inner_l2(u, apply_i(gp)) / (nu * ngp));
        worst.track(inner_l2(u, apply_i(gq)) / (nu * ngq));

        for (double mu : {1e-3, 0.3}) {
            ComplexField yp = yosida_phi(u, mu);
            double nyp = l2_norm(yp) + 1e-300;
            worst.track(inner_l2(yp, apply_i(u)) / (nyp * nu));
            worst.track(inner_l2(yp, apply_i(gp)) / (nyp * ngp));
            ComplexField yq = yosida_psi_r(u, mu, q);
            double nyq = l2_norm(yq) + 1e-300;
            worst.track(inner_l2(yq, apply_i(u)) / ((nyq + 1e-300) * nu));
            worst.track(inner_l2(yq, apply_i(gq)) / ((nyq + 1e-300) * ngq));
        }

        ComplexField comm = sub(apply_i(grad_phi(u)), grad_phi(apply_i(u)));
        worst.track(l2_norm(comm) / ngp);
        ComplexField commq = sub(apply_i(grad_psi_r(u, q)), grad_psi_r(apply_i(u), q));
        worst.track(l2_norm(commq) / ngq);

        double bessel = inner_l2(u, v) * inner_l2(u, v) +
                        inner_l2_skew(u, v) * inner_l2_skew(u, v) -
                        nu * nu * nv * nv;
        if (bessel > 1e-10 * nu * nu * nv * nv) worst.track(1.0);
    }
    return {"imatrix-identities", worst.value <= 1e-10, detail_max(worst.value, 1e-10)};
}

VerifyCheck check_moreau_yosida(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 48);
    SpectralBasis basis = build_basis(d);
    int n = fast ? 20 : 80;
    MaxTracker worst;
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed ^ 0x5eedULL, i), 0.9);
        for (double mu : {1e-4, 1e-2, 1.0, 25.0}) {
            double envelope = moreau_yosida_phi(u, mu);
            double direct = phi(u);
            if (envelope > direct * (1.0 + 1e-12)) worst.track(1.0);
            // inf-form per mode: 1/2 nu c^2 / (1 + mu nu)
            ModePair m = to_mode_pair(u);
            double inf_form = 0.0;
            for (std::size_t k = 0; k < basis.num_modes(); ++k) {
                double c2 = m.c1.a[k] * m.c1.a[k] + m.c2.a[k] * m.c2.a[k];
                inf_form += 0.5 * basis.nu[k] / (1.0 + mu * basis.nu[k]) * c2;
            }
            inf_form *= mode_weight(d);
            worst.track((envelope - inf_form) / (inf_form + 1e-300));
            double ny = l2_norm(yosida_phi(u, mu));
            double ng = l2_norm(grad_phi(u));
            if (ny > ng * (1.0 + 1e-12)) worst.track(1.0);
        }
    }
    return {"moreau-yosida-modewise", worst.value <= 1e-11, detail_max(worst.value, 1e-11)};
}

VerifyCheck check_subdifferential(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 48);
    int n = fast ? 60 : 300;
    const double q = 4.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed ^ 0xabcULL, 2 * i), 0.9);
        ComplexField v = random_field(d, hash_u64(seed ^ 0xabcULL, 2 * i + 1), 0.9);
        ComplexField diff = sub(v, u);
        double scale_phi = std::abs(phi(u)) + std::abs(phi(v)) + 1.0;
        worst = std::max(worst, (inner_l2(grad_phi(u), diff) - (phi(v) - phi(u))) / scale_phi);
        double scale_psi = psi_r(u, q) + psi_r(v, q) + 1.0;
        worst = std::max(worst,
                         (inner_l2(grad_psi_r(u, q), diff) - (psi_r(v, q) - psi_r(u, q))) /
                             scale_psi);
        // monotonicity
        double mono_phi = inner_l2(sub(grad_phi(u), grad_phi(v)), sub(u, v));
        double mono_psi = inner_l2(sub(grad_psi_r(u, q), grad_psi_r(v, q)), sub(u, v));
        worst = std::max(worst, -mono_phi / scale_phi);
        worst = std::max(worst, -mono_psi / scale_psi);
    }
    return {"subdifferential-inequality", worst <= 1e-8,
            "worst excess " + fmt(worst) + ", tol 1e-8"};
}

VerifyCheck check_resolvent(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 48);
    int n = fast ? 40 : 150;
    const double q = 4.0;
    MaxTracker worst_exact;  // U = J_mu U + mu yosida(U), nonexpansiveness
    MaxTracker worst_prox;   // Newton-based pointwise prox identity
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed ^ 0x7e5ULL, 2 * i), 0.9);
        ComplexField v = random_field(d, hash_u64(seed ^ 0x7e5ULL, 2 * i + 1), 0.9);
        for (double mu : {1e-3, 0.5, 5.0}) {
            ComplexField ju = resolvent_phi(u, mu);
            ComplexField recon = ju;
            axpy(mu, yosida_phi(u, mu), recon);
            worst_exact.track(l2_norm(sub(recon, u)) / l2_norm(u));
            double lip = l2_norm(sub(resolvent_phi(u, mu), resolvent_phi(v, mu))) /
                         (l2_norm(sub(u, v)) + 1e-300);
            if (lip > 1.0 + 1e-12) worst_exact.track(1.0);
            // pointwise prox identity for psi_q
            ComplexField jq = resolvent_psi_r(u, mu, q);
            ComplexField rq = jq;
            axpy(mu, grad_psi_r(jq, q), rq);
            worst_prox.track(l2_norm(sub(rq, u)) / l2_norm(u));
        }
    }
    bool ok = worst_exact.value <= 1e-12 && worst_prox.value <= 1e-10;
    return {"resolvent-identities", ok,
            detail_max(worst_exact.value, 1e-12) + "; prox " +
                detail_max(worst_prox.value, 1e-10)};
}

VerifyCheck check_transforms(bool fast, std::uint64_t seed) {
    MaxTracker worst;
    std::vector<Domain> domains = {Domain::interval(M_PI, 64), Domain::interval(2.5, 33)};
    if (!fast) domains.push_back(Domain::rectangle(M_PI, 1.7, 20, 12));
    for (const auto& d : domains) {
        SpectralBasis basis = build_basis(d);
        for (int i = 0; i < (fast ? 10 : 40); ++i) {
            ComplexField u = random_field(d, hash_u64(seed ^ 0xf00dULL, i), 0.4);
            ModePair m = to_mode_pair(u);
            ComplexField back = from_mode_pair(d, m);
            worst.track(l2_norm(sub(back, u)) / l2_norm(u));
            double parseval = 0.0;
            for (std::size_t k = 0; k < m.c1.size(); ++k)
                parseval += m.c1.a[k] * m.c1.a[k] + m.c2.a[k] * m.c2.a[k];
            parseval *= mode_weight(d);
            worst.track((parseval - l2_norm_sq(u)) / l2_norm_sq(u));
            // Laplacian diagonalization in mode space
            ModePair g = to_mode_pair(grad_phi(u));
            for (std::size_t k = 0; k < g.c1.size(); ++k) {
                double ref = basis.nu[k] * m.c1.a[k];
                worst.track((g.c1.a[k] - ref) / (std::abs(ref) + 1.0));
            }
        }
    }
    return {"transform-roundtrip-parseval", worst.value <= 1e-10,
            detail_max(worst.value, 1e-10)};
}

VerifyCheck check_poincare(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(2.0, 56);
    SpectralBasis basis = build_basis(d);
    int n = fast ? 40 : 200;
    MaxTracker worst;
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed ^ 0x9eULL, i), 0.8);
        double p2 = psi_r(u, 2.0);
        double ph = phi(u);
        if (p2 > ph / basis.lambda1 * (1.0 + 1e-12)) worst.track(1.0);
        double gap = l2_norm_sq(grad_phi(u)) - 2.0 * basis.lambda1 * ph;
        if (gap < -1e-12 * l2_norm_sq(grad_phi(u))) worst.track(1.0);
    }
    ComplexField e1 = parse_mode_field(d, "1:1:0");
    worst.track(psi_r(e1, 2.0) - phi(e1) / basis.lambda1);
    return {"poincare-spectral-gap", worst.value <= 1e-12, detail_max(worst.value, 1e-12)};
}

VerifyCheck check_lipschitz(bool fast, std::uint64_t seed) {
    std::size_t samples = fast ? 20000 : 100000;
    std::size_t violations = 0;
    for (double r : {2.5, 3.0, 3.5, 4.0, 5.0}) {
        auto rep = check_pointwise_lipschitz(r, samples, seed);
        violations += rep.violations_main + rep.violations_diff;
    }
    return {"pointwise-lipschitz", violations == 0,
            std::to_string(violations) + " violations over 5 exponents x " +
                std::to_string(samples) + " samples"};
}

VerifyCheck check_gronwall(bool, std::uint64_t) {
    const double delta = 0.7, big_k = 1.3, j0 = 2.0, horizon = 6.0;
    const int n = 1200;
    std::vector<double> ts(n + 1);
    for (int i = 0; i <= n; ++i) ts[i] = horizon * i / n;
    bool ok = true;

    // f = 0: equality case
    {
        std::vector<double> f(n + 1, 0.0), j(n + 1);
        for (int i = 0; i <= n; ++i) j[i] = j0 * std::exp(-delta * ts[i]);
        GronwallEnvelope env{j0, delta, big_k, 0.0};
        ok = ok && gronwall_check(env, ts, j);
    }
    // f = 1: exact ODE solution j' + delta j = K
    {
        std::vector<double> f(n + 1, 1.0), j(n + 1);
        for (int i = 0; i <= n; ++i)
            j[i] = big_k / delta + (j0 - big_k / delta) * std::exp(-delta * ts[i]);
        auto env = gronwall_envelope(j0, delta, big_k, ts, f);
        ok = ok && std::abs(env.f_window_l1 - 1.0) < 1e-9;
        ok = ok && gronwall_check(env, ts, j);
    }
    // single pulse on [1, 1.5]
    {
        std::vector<double> f(n + 1, 0.0), j(n + 1);
        for (int i = 0; i <= n; ++i) f[i] = (ts[i] >= 1.0 && ts[i] <= 1.5) ? 1.0 : 0.0;
        for (int i = 0; i <= n; ++i) {
            double t = ts[i];
            double driven = 0.0;  // K int_0^t e^{-delta(t-s)} f ds, closed form
            if (t > 1.0) {
                double upper = std::min(t, 1.5);
                driven = big_k / delta *
                         (std::exp(-delta * (t - upper)) - std::exp(-delta * (t - 1.0)));
            }
            j[i] = j0 * std::exp(-delta * t) + driven;
        }
        auto env = gronwall_envelope(j0, delta, big_k, ts, f);
        ok = ok && gronwall_check(env, ts, j);
        // a deliberate violator must be flagged
        std::vector<double> bad(n + 1);
        for (int i = 0; i <= n; ++i) bad[i] = env.value(ts[i]) * 1.05;
        ok = ok && !gronwall_check(env, ts, bad);
    }
    return {"gronwall-checker", ok, "exact solutions pass, violator flagged"};
}

VerifyCheck check_gns(bool fast, std::uint64_t seed) {
    MaxTracker worst;
    struct Case { double q; int dim; };
    for (const Case c : {Case{4.0, 1}, Case{4.0, 2}, Case{4.5, 3}, Case{5.0, 3}}) {
        GnsExponents e = gns_exponents(c.q, c.dim);
        double a = 0.5 - 2.0 / c.dim, b = 0.5 - 1.0 / c.dim;
        worst.track(1.0 / (2.0 * (c.q - 1.0)) - (a * (1.0 - e.xi) + b * e.xi));
        worst.track(1.0 / c.q - (b * (1.0 - e.eta) + 0.5 * e.eta));
        if (!(e.chi > 1.0)) worst.track(1.0);
        if (!((1.0 - e.xi) * (c.q - 1.0) < 1.0)) worst.track(1.0);
    }
    bool rejected = false;
    try {
        gns_exponents(6.0, 3);
    } catch (const SupercriticalExponent&) {
        rejected = true;
    }
    if (!rejected) worst.track(1.0);

    // Interpolation inequality with a measured constant.
    Domain d = Domain::interval(M_PI, 64);
    const double q = 4.0;
    GnsExponents e = gns_exponents(q, 1);
    double c_meas = measure_interpolation_constant(d, q, fast ? 30 : 80, seed);
    int n = fast ? 60 : 200;
    for (int i = 0; i < n; ++i) {
        ComplexField w = random_field(d, hash_u64(seed ^ 0x1717ULL, i), 0.8);
        double lhs = lr_norm(w, q);
        double rhs = c_meas * std::pow(phi(w), (1.0 - e.eta) / 2.0) *
                     std::pow(l2_norm(w), e.eta);
        if (lhs > rhs * (1.0 + 1e-9)) worst.track(1.0);
    }
    return {"gns-exponents-interpolation", worst.value <= 1e-14,
            detail_max(worst.value, 1e-14) + ", measured C " + fmt(c_meas)};
}

VerifyCheck check_splitting(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 64);
    const double q = 4.0;
    GnsExponents e = gns_exponents(q, 1);
    bool ok = true;
    std::string detail;
    for (double eps : {0.1, 0.01}) {
        double c_eps = measure_splitting_constant(d, q, eps, fast ? 30 : 80, seed);
        int n = fast ? 60 : 200;
        for (int i = 0; i < n; ++i) {
            ComplexField u = random_field(d, hash_u64(seed ^ 0x3333ULL, i), 0.8);
            double p = phi(u);
            if (!(p > 0.0)) continue;
            double target = 0.05 + 0.95 * hash_uniform(seed ^ 0x3333ULL, 100000 + i);
            u = scale(std::sqrt(target / p), u);
            double lhs = l2_norm_sq(grad_psi_r(u, q));
            double rhs = eps * (l2_norm_sq(grad_phi(u)) + l2_norm_sq(u)) +
                         c_eps * std::pow(phi(u), e.chi);
            if (lhs > rhs * (1.0 + 1e-9)) ok = false;
        }
        detail += "C_" + fmt(eps) + " = " + fmt(c_eps) + "  ";
    }
    return {"splitting-inequality", ok, detail + "(lower-bound-based)"};
}

VerifyCheck check_coercivity(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p;  // lambda = kappa = 1, gamma = 0, q = 4
    SmallDataCertificate cert = small_data_certificate(p, d, fast ? 60 : 150, seed);
    auto rep = coercivity_fuzz(p, d, cert, fast ? 100 : 400, seed ^ 0xc0eULL);
    return {"coercivity-below-eps0", rep.failures == 0,
            std::to_string(rep.failures) + " failures, worst margin " +
                fmt(rep.worst_margin)};
}

VerifyCheck check_complex_oracle(bool fast, std::uint64_t seed) {
    Domain d = Domain::interval(M_PI, 48);
    int n = fast ? 30 : 120;
    MaxTracker worst;
    for (int i = 0; i < n; ++i) {
        ComplexField u = random_field(d, hash_u64(seed ^ 0xce11ULL, i), 0.7);
        double a = 2.0 * hash_uniform(seed, 400000 + i) - 1.0;
        double b = 2.0 * hash_uniform(seed, 500000 + i) - 1.0;
        ComplexField iu = apply_i(u);
        ComplexField su = complex_scale(a, b, u);
        for (std::size_t j = 0; j < u.size(); ++j) {
            // identification u = u1 - i u2
            std::complex<double> z(u.u1.values[j], -u.u2.values[j]);
            std::complex<double> iz = std::complex<double>(0.0, 1.0) * z;
            std::complex<double> sz = std::complex<double>(a, b) * z;
            worst.track(iu.u1.values[j] - iz.real());
            worst.track(iu.u2.values[j] + iz.imag());
            worst.track(su.u1.values[j] - sz.real());
            worst.track(su.u2.values[j] + sz.imag());
        }
    }
    return {"complex-oracle-pointwise", worst.value <= 1e-14,
            detail_max(worst.value, 1e-14)};
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(bool fast, std::uint64_t seed) {
    std::vector<VerifyCheck> checks;
    checks.push_back(check_imatrix(fast, seed));
    checks.push_back(check_moreau_yosida(fast, seed));
    checks.push_back(check_subdifferential(fast, seed));
    checks.push_back(check_resolvent(fast, seed));
    checks.push_back(check_transforms(fast, seed));
    checks.push_back(check_poincare(fast, seed));
    checks.push_back(check_lipschitz(fast, seed));
    checks.push_back(check_gronwall(fast, seed));
    checks.push_back(check_gns(fast, seed));
    checks.push_back(check_splitting(fast, seed));
    checks.push_back(check_coercivity(fast, seed));
    checks.push_back(check_complex_oracle(fast, seed));
    return checks;
}

}  // namespace cgl
