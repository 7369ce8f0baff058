// Command-line driver: simulation runs, analytic property audits, a single
// collision debug view, and the deterministic-vs-Monte-Carlo oracle.
//
// Exit codes: 0 success, 1 configuration/argument error, 2 step failure,
// 3 audit failure.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flrwb/checkpoint.hpp"
#include "flrwb/collision_kernels.hpp"
#include "flrwb/collision_operator.hpp"
#include "flrwb/diagnostics.hpp"
#include "flrwb/kinematics.hpp"
#include "flrwb/solver.hpp"

namespace {

using namespace flrwb;

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 random_direction(std::mt19937_64& rng) {
    const double cz = 1.0 - 2.0 * u01(rng);
    const double phi = 2.0 * std::numbers::pi * u01(rng);
    const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    return {sz * std::cos(phi), sz * std::sin(phi), cz};
}

struct AuditReport {
    bool all_pass = true;
    void line(const std::string& name, bool pass, const std::string& detail) {
        std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_pass = all_pass && pass;
    }
};

void audit_kinematics(AuditReport& rep, std::int64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double max_hs = 0.0, max_cons = 0.0, max_shell = 0.0, max_axis_unit = 0.0,
           max_axis_orth = 0.0, max_invol = 0.0;
    bool basic_ok = true;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double sigma = std::pow(10.0, -1.0 + 2.5 * u01(rng));
        const Vec3 pv = sigma * random_direction(rng) * (2.0 * u01(rng));
        const Vec3 qv = sigma * random_direction(rng) * (2.0 * u01(rng));
        const FourVector p = on_shell(pv);
        const FourVector q = on_shell(qv);
        const Vec3 omega = random_direction(rng);

        const auto inv = collision_invariants(p, q);
        max_hs = std::max(max_hs, std::abs(inv.s - 4.0 - inv.h * inv.h) / inv.s);

        const double pq_dist = norm(pv - qv);
        if (!(pq_dist / std::sqrt(p.t * q.t) <= inv.h + 1e-12) || !(inv.h <= pq_dist + 1e-12) ||
            !(inv.s <= 4.0 * p.t * q.t * (1.0 + 1e-12)) || !(norm(pv) <= p.t))
            basic_ok = false;

        const FourVector n = p + q;
        const FourVector axis = scatter_axis(n, inv.s, omega);
        max_axis_unit = std::max(max_axis_unit, std::abs(minkowski_dot(axis, axis) - 1.0));
        max_axis_orth = std::max(max_axis_orth, std::abs(minkowski_dot(n, axis)));

        const auto post = post_collision(p, q, omega);
        const FourVector total = post.p_prime + post.q_prime - n;
        max_cons = std::max({max_cons, std::abs(total.t), std::abs(total.x), std::abs(total.y),
                             std::abs(total.z)});
        max_shell = std::max({max_shell, std::abs(shell_defect(post.p_prime)),
                              std::abs(shell_defect(post.q_prime))});

        const auto again = post_collision(post.p_prime, post.q_prime, omega);
        const FourVector dp = again.p_prime - p;
        max_invol = std::max({max_invol, std::abs(dp.t), std::abs(dp.x), std::abs(dp.y),
                              std::abs(dp.z)});
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "max |s-4-h^2|/s = %.3e (tol 1e-10)", max_hs);
    rep.line("kinematics/invariant-identity", max_hs <= 1e-10, buf);
    std::snprintf(buf, sizeof buf, "max four-momentum defect = %.3e (tol 1e-11)", max_cons);
    rep.line("kinematics/conservation", max_cons <= 1e-11, buf);
    std::snprintf(buf, sizeof buf, "max mass-shell defect = %.3e (tol 1e-11)", max_shell);
    rep.line("kinematics/mass-shell", max_shell <= 1e-11, buf);
    std::snprintf(buf, sizeof buf, "max |axis.axis - 1| = %.3e, max |n.axis| = %.3e (tol 1e-12)",
                  max_axis_unit, max_axis_orth);
    rep.line("kinematics/scatter-axis", max_axis_unit <= 1e-12 && max_axis_orth <= 1e-12, buf);
    std::snprintf(buf, sizeof buf, "max repeat-collision closure defect = %.3e (tol 1e-10)",
                  max_invol);
    rep.line("kinematics/involution", max_invol <= 1e-10, buf);
    rep.line("kinematics/basic-estimates", basic_ok,
             basic_ok ? "h and s bounds hold on all samples" : "a sampled pair violated a bound");
}

void audit_moment_ratio(AuditReport& rep) {
    const double scales[4] = {1.0, std::exp(1.0), std::exp(2.0), std::exp(3.0)};
    bool all_ok = true;
    char buf[256];
    for (int m : {0, 2, 4}) {
        double ratios[4];
        for (int i = 0; i < 4; ++i) ratios[i] = moment_ratio_audit(scales[i], m);
        double lo = ratios[0], hi = ratios[0];
        for (double r : ratios) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const double spread = (hi - lo) / hi;
        const bool ok = spread <= 0.01;
        all_ok = all_ok && ok;
        std::snprintf(buf, sizeof buf, "m=%d ratio=%.9g spread across R in {1,e,e^2,e^3} = %.2e",
                      m, ratios[0], spread);
        rep.line("moment-ratio/scale-invariance", ok, buf);
    }
    // Monotone in the moment order.
    const double r0 = moment_ratio_audit(1.0, 0);
    const double r2 = moment_ratio_audit(1.0, 2);
    std::snprintf(buf, sizeof buf, "ratio(m=2)/ratio(m=0) = %.6g", r2 / r0);
    rep.line("moment-ratio/monotone", r2 > r0, buf);
    (void)all_ok;
}

void audit_weight_transfer(AuditReport& rep, std::int64_t samples, std::uint64_t seed) {
    const auto res = weight_transfer_audit(std::max<std::int64_t>(samples, 10000), seed);
    char buf[256];
    std::snprintf(buf, sizeof buf, "max ratio = %.6g at |p_*| = %.3g, R = %.3g (bound 17)",
                  res.max_ratio, res.at_p_norm, res.at_R);
    rep.line("weight-transfer/bound", res.max_ratio <= 17.0, buf);
}

void audit_jacobian(AuditReport& rep, std::int64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Volume identity: 6x6 FD determinant equals (p'0 q'0)/(p0 q0).
    double max_rel = 0.0;
    const std::int64_t configs = std::min<std::int64_t>(std::max<std::int64_t>(samples, 1000),
                                                        20000);
    for (std::int64_t i = 0; i < configs; ++i) {
        const double sigma = 0.1 + 2.9 * u01(rng);
        const Vec3 pv = sigma * (2.0 * u01(rng)) * random_direction(rng);
        const Vec3 qv = sigma * (2.0 * u01(rng)) * random_direction(rng);
        const Vec3 omega = random_direction(rng);
        const double R = std::exp(-1.0 + 2.0 * u01(rng));
        const CovariantMomentum p = CovariantMomentum::from_vec(pv);
        const CovariantMomentum q = CovariantMomentum::from_vec(qv);
        const double step = 1e-5 * std::max(1.0, std::max(norm(pv), norm(qv)));
        const auto J = collision_map_jacobian_fd(p, q, omega, R, step);
        const double det = std::abs(determinant(J));
        const auto out = post_collision_covariant(p, q, omega, R);
        const double expected = (mass_shell_energy(out.p_star, R) *
                                 mass_shell_energy(out.q_star, R)) /
                                (mass_shell_energy(p, R) * mass_shell_energy(q, R));
        max_rel = std::max(max_rel, std::abs(det - expected) / expected);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "max |det - p'0 q'0/(p0 q0)| rel = %.3e over %lld configs",
                  max_rel, static_cast<long long>(configs));
    rep.line("jacobian/volume-identity", max_rel <= 1e-5, buf);

    // Derivative boundedness: sup norm of d p'/d p at fixed (q, omega) stays
    // flat as |p| scans three decades.
    const CovariantMomentum q_fix{0.3, -0.2, 0.5};
    const Vec3 omega_fix = {0.48, -0.6, 0.64};
    const Vec3 dir = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
    double base = 0.0, worst = 0.0, worst_p = 1.0;
    std::printf("  |p_*|      sup-norm d p'/d p\n");
    for (int i = 0; i <= 12; ++i) {
        const double mag = std::pow(10.0, 3.0 * i / 12.0);
        const CovariantMomentum p = CovariantMomentum::from_vec(mag * dir);
        const auto jac = post_collision_jacobian_fd(p, q_fix, omega_fix, 1.0,
                                                    1e-5 * std::max(1.0, mag));
        const double nrm = spectral_norm(jac.d_pprime_d_p);
        std::printf("  %9.3g  %.6g%s\n", mag, nrm, jac.reliable ? "" : "  (unreliable)");
        if (i == 0) base = nrm;
        if (nrm > worst) {
            worst = nrm;
            worst_p = mag;
        }
    }
    std::snprintf(buf, sizeof buf, "max sup-norm %.6g at |p_*| = %.3g vs %.6g at |p_*| = 1",
                  worst, worst_p, base);
    rep.line("jacobian/no-growth", worst <= 2.0 * base, buf);
}

int run_audit(const std::string& which, std::int64_t samples, std::uint64_t seed) {
    AuditReport rep;
    if (which == "kinematics" || which == "all") audit_kinematics(rep, samples, seed);
    if (which == "lemma42" || which == "all") audit_moment_ratio(rep);
    if (which == "lemma43" || which == "all") audit_weight_transfer(rep, samples, seed);
    if (which == "jacobian" || which == "all") audit_jacobian(rep, samples, seed);
    return rep.all_pass ? 0 : 3;
}

int run_collide(const std::vector<double>& pv, const std::vector<double>& qv,
                const std::vector<double>& wv, double R) {
    const CovariantMomentum p{pv[0], pv[1], pv[2]};
    const CovariantMomentum q{qv[0], qv[1], qv[2]};
    Vec3 omega{wv[0], wv[1], wv[2]};
    const double wn = norm(omega);
    if (!(wn > 0.0)) {
        std::fprintf(stderr, "omega must be a nonzero direction\n");
        return 1;
    }
    omega = omega * (1.0 / wn);
    if (!(R > 0.0)) {
        std::fprintf(stderr, "R must be positive\n");
        return 1;
    }
    const FourVector ph = on_shell({p.p1 / R, p.p2 / R, p.p3 / R});
    const FourVector qh = on_shell({q.p1 / R, q.p2 / R, q.p3 / R});
    const auto geo = resolve_collision(ph, qh, omega);
    const auto cov = post_collision_covariant(p, q, omega, R);

    nlohmann::json j;
    j["R"] = R;
    j["p_star"] = {p.p1, p.p2, p.p3};
    j["q_star"] = {q.p1, q.p2, q.p3};
    j["omega"] = {omega.x, omega.y, omega.z};
    j["h"] = geo.h;
    j["s"] = geo.s;
    j["Omega"] = {geo.axis.t, geo.axis.x, geo.axis.y, geo.axis.z};
    const bool theta_defined = geo.h > 0.0;
    j["theta_defined"] = theta_defined;
    if (theta_defined)
        j["theta"] = scattering_angle(ph, qh, geo.axis);
    else
        j["theta"] = nullptr;
    j["p_hat_prime"] = {geo.p_prime.t, geo.p_prime.x, geo.p_prime.y, geo.p_prime.z};
    j["q_hat_prime"] = {geo.q_prime.t, geo.q_prime.x, geo.q_prime.y, geo.q_prime.z};
    j["p_star_prime"] = {cov.p_star.p1, cov.p_star.p2, cov.p_star.p3};
    j["q_star_prime"] = {cov.q_star.p1, cov.q_star.p2, cov.q_star.p3};

    const FourVector total = geo.p_prime + geo.q_prime - geo.n;
    j["defects"] = {
        {"s_minus_4_minus_h2", geo.s - 4.0 - geo.h * geo.h},
        {"momentum_conservation",
         std::max({std::abs(total.t), std::abs(total.x), std::abs(total.y), std::abs(total.z)})},
        {"mass_shell_p_prime", shell_defect(geo.p_prime)},
        {"mass_shell_q_prime", shell_defect(geo.q_prime)},
        {"axis_unit", minkowski_dot(geo.axis, geo.axis) - 1.0},
        {"axis_orthogonal", minkowski_dot(geo.n, geo.axis)},
        {"frame_consistency",
         std::max({std::abs(cov.p_star.p1 - R * geo.p_prime.x),
                   std::abs(cov.p_star.p2 - R * geo.p_prime.y),
                   std::abs(cov.p_star.p3 - R * geo.p_prime.z)})},
    };
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
}

int run_oracle(const std::string& config_path, int points, std::int64_t samples,
               std::uint64_t seed_override, bool seed_given) {
    const SimConfig cfg = load_config(config_path);
    const std::uint64_t seed = seed_given ? seed_override : cfg.seed;
    const DistributionGrid f = initial_data(cfg.initial.kind, cfg.initial.epsilon,
                                            cfg.grid.extent, cfg.grid.n,
                                            {cfg.initial.r0, cfg.initial.width});
    const CollisionOperator op(SphereQuadrature(cfg.sphere.polar_order, cfg.sphere.azimuth_order));
    const double R = 1.0;

    std::mt19937_64 rng(seed);
    std::printf("point,px,py,pz,gain_det,loss_det,gain_mc,gain_stderr,loss_mc,loss_stderr,"
                "z_gain,z_loss\n");
    for (int i = 0; i < points; ++i) {
        // Evaluation points concentrated where the data lives.
        const CovariantMomentum p{f.extent() * (2.0 * u01(rng) - 1.0) * 0.5,
                                  f.extent() * (2.0 * u01(rng) - 1.0) * 0.5,
                                  f.extent() * (2.0 * u01(rng) - 1.0) * 0.5};
        const auto det = op.at_point(f, p, R);
        const double loss_det = f.sample(p) * det.loss_coeff;
        const auto mc = CollisionOperator::mc_estimate(f, p, R, samples, seed + 1 + i);
        const double zg = mc.stderr_gain > 0.0 ? (det.gain - mc.gain) / mc.stderr_gain : 0.0;
        const double zl = mc.stderr_loss > 0.0 ? (loss_det - mc.loss) / mc.stderr_loss : 0.0;
        std::printf("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                    p.p1, p.p2, p.p3, det.gain, loss_det, mc.gain, mc.stderr_gain, mc.loss,
                    mc.stderr_loss, zg, zl);
    }
    return 0;
}

int run_simulate(const std::string& config_path) {
    const SimConfig cfg = load_config(config_path);
    Solver solver(cfg);
    try {
        const auto records = solver.run();
        write_csv(cfg.output.path, records_to_csv(records, cfg.norms));
        save_checkpoint(cfg.output.path + ".chk", solver.state().f, solver.state().t,
                        solver.state().spacetime.R(solver.state().t));
    } catch (const StepError& e) {
        std::fprintf(stderr, "step failure at t = %.6g (step %lld): %s\n", solver.state().t,
                     static_cast<long long>(solver.state().step_count), e.what());
        const std::string dump = cfg.output.path + ".failed.chk";
        save_checkpoint(dump, solver.state().f, solver.state().t,
                        solver.state().spacetime.R(solver.state().t));
        std::fprintf(stderr, "last valid state dumped to %s\n", dump.c_str());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collision-kinetic matter in an exponentially expanding background"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "run a configured simulation");
    sim->add_option("--config", config_path, "JSON configuration file")->required();

    std::string which = "all";
    std::int64_t samples = 100000;
    std::uint64_t seed = 12345;
    auto* aud = app.add_subcommand("audit", "run analytic property audits");
    aud->add_option("--which", which, "kinematics|lemma42|lemma43|jacobian|all");
    aud->add_option("--samples", samples, "sample count for randomized audits");
    aud->add_option("--seed", seed, "random seed");

    std::vector<double> pv{0, 0, 0}, qv{0, 0, 0}, wv{0, 0, 1};
    double R = 1.0;
    auto* col = app.add_subcommand("collide", "resolve one binary collision");
    col->add_option("--p", pv, "covariant momentum p_*")->expected(3);
    col->add_option("--q", qv, "covariant momentum q_*")->expected(3);
    col->add_option("--omega", wv, "scattering direction")->expected(3);
    col->add_option("--R", R, "scale factor");

    int points = 100;
    std::int64_t mc_samples = 20000;
    std::uint64_t oracle_seed = 0;
    auto* orc = app.add_subcommand("oracle", "deterministic vs Monte Carlo comparison");
    orc->add_option("--config", config_path, "JSON configuration file")->required();
    orc->add_option("--points", points, "number of evaluation points");
    orc->add_option("--samples", mc_samples, "Monte Carlo samples per point");
    auto* seed_opt = orc->add_option("--seed", oracle_seed, "override the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (*sim) return run_simulate(config_path);
        if (*aud) {
            if (which != "kinematics" && which != "lemma42" && which != "lemma43" &&
                which != "jacobian" && which != "all") {
                std::fprintf(stderr, "unknown audit: %s\n", which.c_str());
                return 1;
            }
            return run_audit(which, samples, seed);
        }
        if (*col) return run_collide(pv, qv, wv, R);
        if (*orc) return run_oracle(config_path, points, mc_samples, oracle_seed,
                                    seed_opt->count() > 0);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
