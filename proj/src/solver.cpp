#include "flrwb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace flrwb {

PicardResult picard_update(const DistributionGrid& f, const CollisionOperator& op,
                           double scale_factor, double dt, int iters) {
    if (iters < 1) throw std::invalid_argument("picard_update needs at least one sweep");
    const std::int64_t N = f.size();
    const std::vector<double>& f_old = f.values();

    DistributionGrid prev = f;
    PicardResult out;
    out.f_new = f_old;
    for (int sweep = 0; sweep < iters; ++sweep) {
        const QEvaluation q = op.evaluate(prev, scale_factor);
        double residual = 0.0;
        for (std::int64_t k = 0; k < N; ++k) {
            const double v = (f_old[k] + dt * q.gain[k]) / (1.0 + dt * q.loss_coeff[k]);
            residual = std::max(residual, std::abs(v - prev.values()[k]));
            out.f_new[k] = v;
        }
        out.leakage = q.leakage;
        // The first sweep's change is the time increment itself, not a
        // fixed-point defect; only report convergence of later sweeps.
        out.residual = sweep > 0 ? residual : 0.0;
        if (sweep + 1 < iters) prev.values() = out.f_new;
    }
    return out;
}

namespace {

ScaleFactorModel make_model(const SimConfig& cfg, double rho0, double P0) {
    if (cfg.scale_factor == "coupled") return ScaleFactorModel::coupled(cfg.lambda, rho0, P0);
    return ScaleFactorModel::analytic_preset(cfg.scale_factor, cfg.lambda, rho0);
}

}  // namespace

Solver::Solver(const SimConfig& config)
    : cfg_(config),
      op_(SphereQuadrature(config.sphere.polar_order, config.sphere.azimuth_order)),
      state_(initial_data(config.initial.kind, config.initial.epsilon, config.grid.extent,
                          config.grid.n, {config.initial.r0, config.initial.width}),
             ScaleFactorModel::analytic_preset("desitter", config.lambda)),
      dt_(config.dt) {
    cfg_.validate();
    rho0_ = energy_density(state_.f, 1.0);
    const double P0 = pressure(state_.f, 1.0);
    state_.spacetime = make_model(cfg_, rho0_, P0);
}

StepResult Solver::step() {
    const double R = state_.spacetime.R(state_.t);
    const double tol = 1e-10 * state_.f.max_value();

    StepResult res;
    PicardResult pic;
    for (int attempt = 0;; ++attempt) {
        const double dt_try = std::min(dt_, cfg_.T - state_.t);
        pic = picard_update(state_.f, op_, R, dt_try, cfg_.picard_iters);
        if (pic.residual <= tol || cfg_.picard_iters < 2) {
            res.dt_used = dt_try;
            break;
        }
        if (attempt >= 8)
            throw StepError("picard iteration failed to converge after 8 dt halvings");
        dt_ *= 0.5;
        ++res.halvings;
    }

    state_.f.values() = std::move(pic.f_new);
    for (double v : state_.f.values())
        if (v < 0.0 || !std::isfinite(v)) throw StepError("positivity lost in the update");

    if (state_.spacetime.is_coupled()) {
        const DistributionGrid& f = state_.f;
        MatterSource src{[&f](double R_sub) { return energy_density(f, R_sub); },
                         [&f](double R_sub) { return pressure(f, R_sub); }};
        state_.spacetime.advance(res.dt_used, src);
    }
    state_.t += res.dt_used;
    ++state_.step_count;
    last_leakage_ = pic.leakage;
    res.residual = pic.residual;
    res.leakage = pic.leakage;

    const auto bounds = sandwich_bounds(state_.t, cfg_.lambda, rho0_);
    if (!bounds.holds(state_.spacetime.R(state_.t)))
        throw StepError("scale factor left the exponential sandwich bounds");
    return res;
}

DiagnosticsRecord Solver::make_record() const {
    DiagnosticsRecord rec;
    rec.t = state_.t;
    rec.R = state_.spacetime.R(state_.t);
    rec.rho = energy_density(state_.f, rec.R);
    rec.P = pressure(state_.f, rec.R);
    rec.number_integral = number_integral(state_.f);
    rec.norms.reserve(cfg_.norms.size());
    for (const auto& spec : cfg_.norms) rec.norms.push_back(weighted_norm(state_.f, spec, rec.R));
    const int env_k = cfg_.norms.empty() ? 0 : cfg_.norms.front().k;
    rec.decay_envelope = decay_envelope(state_.f, rec.R, env_k);
    rec.leakage = static_cast<double>(last_leakage_);
    return rec;
}

std::vector<DiagnosticsRecord> Solver::run() {
    std::vector<DiagnosticsRecord> records;
    std::vector<double> hubble;
    auto emit = [&] {
        records.push_back(make_record());
        hubble.push_back(state_.spacetime.Rdot(state_.t) / state_.spacetime.R(state_.t));
    };
    emit();
    double next_output = cfg_.output.interval;
    while (state_.t < cfg_.T - 1e-12) {
        step();
        if (state_.t >= next_output - 1e-9 * cfg_.output.interval ||
            state_.t >= cfg_.T - 1e-12) {
            emit();
            while (next_output <= state_.t + 1e-9 * cfg_.output.interval)
                next_output += cfg_.output.interval;
        }
    }
    fill_continuity_residuals(records, hubble);
    return records;
}

void fill_continuity_residuals(std::vector<DiagnosticsRecord>& records,
                               const std::vector<double>& hubble) {
    const std::size_t n = records.size();
    if (n < 2) return;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        const double dt = records[hi].t - records[lo].t;
        if (dt <= 0.0) continue;
        const double rho_dot = (records[hi].rho - records[lo].rho) / dt;
        records[i].continuity_residual =
            rho_dot + 3.0 * hubble[i] * (records[i].rho + records[i].P);
    }
}

std::string records_to_csv(const std::vector<DiagnosticsRecord>& records,
                           const std::vector<NormSpec>& norms) {
    std::string out = "t,R,rho,P,number_integral";
    char buf[64];
    for (const auto& s : norms) {
        std::snprintf(buf, sizeof buf, ",norm_k%d_N%d", s.k, s.N);
        out += buf;
    }
    out += ",decay_envelope,leakage,continuity_residual\n";
    auto put = [&](double v, bool lead_comma = true) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (lead_comma) out += ',';
        out += buf;
    };
    for (const auto& r : records) {
        put(r.t, false);
        put(r.R);
        put(r.rho);
        put(r.P);
        put(r.number_integral);
        for (double v : r.norms) put(v);
        put(r.decay_envelope);
        put(r.leakage);
        put(r.continuity_residual);
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const std::string& csv_text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << csv_text;
    if (!out) throw std::runtime_error("short write on output file: " + path);
}

}  // namespace flrwb
