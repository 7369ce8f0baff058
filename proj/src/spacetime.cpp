#include "flrwb/spacetime.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flrwb {

namespace {
constexpr double kEightPi = 8.0 * std::numbers::pi;
}

double hubble_rate(const FriedmannState& state, double lambda) {
    if (state.rho < 0.0) throw std::domain_error("weak energy condition violated: rho < 0");
    if (!(lambda > 0.0)) throw std::domain_error("cosmological constant must be positive");
    return std::sqrt((kEightPi * state.rho + lambda) / 3.0);
}

double continuity_rhs(const FriedmannState& state, double lambda) {
    return -3.0 * hubble_rate(state, lambda) * (state.rho + state.P);
}

namespace {

struct Deriv {
    double dR;
    double drho;
};

Deriv rhs(const FriedmannState& s, double lambda, double eos_w, const MatterSource* matter) {
    FriedmannState cur = s;
    if (matter) {
        cur.rho = matter->rho(cur.R);
        cur.P = matter->pressure(cur.R);
    } else {
        cur.P = eos_w * cur.rho;
    }
    const double H = hubble_rate(cur, lambda);
    Deriv d;
    d.dR = cur.R * H;
    d.drho = matter ? 0.0 : -3.0 * H * (cur.rho + cur.P);
    return d;
}

FriedmannState rk4_once(const FriedmannState& s, double lambda, double dt, double eos_w,
                        const MatterSource* matter) {
    auto at = [&](double fR, double frho, double scale) {
        FriedmannState t = s;
        t.R = s.R + scale * fR;
        t.rho = s.rho + scale * frho;
        return t;
    };
    const Deriv k1 = rhs(s, lambda, eos_w, matter);
    const Deriv k2 = rhs(at(k1.dR, k1.drho, 0.5 * dt), lambda, eos_w, matter);
    const Deriv k3 = rhs(at(k2.dR, k2.drho, 0.5 * dt), lambda, eos_w, matter);
    const Deriv k4 = rhs(at(k3.dR, k3.drho, dt), lambda, eos_w, matter);
    FriedmannState out = s;
    out.t = s.t + dt;
    out.R = s.R + dt / 6.0 * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
    out.rho = s.rho + dt / 6.0 * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
    if (matter) {
        out.rho = matter->rho(out.R);
        out.P = matter->pressure(out.R);
    } else {
        out.P = eos_w * out.rho;
    }
    return out;
}

}  // namespace

FriedmannState friedmann_step(const FriedmannState& state, double lambda, double dt, double eos_w,
                              const MatterSource* matter) {
    if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
    double h = dt;
    FriedmannState cur = state;
    for (int attempt = 0; attempt <= 10; ++attempt) {
        double remaining = dt;
        cur = state;
        bool ok = true;
        while (remaining > 1e-300) {
            const double step = std::min(h, remaining);
            const FriedmannState next = rk4_once(cur, lambda, step, eos_w, matter);
            if (next.rho < 0.0) {
                ok = false;
                break;
            }
            cur = next;
            remaining -= step;
        }
        if (ok) return cur;
        h *= 0.5;
    }
    throw std::runtime_error("friedmann_step: rho < 0 persisted after 10 halvings");
}

ScaleFactorModel ScaleFactorModel::analytic_preset(const std::string& name, double lambda,
                                                   double rho0) {
    if (!(lambda > 0.0)) throw std::domain_error("cosmological constant must be positive");
    if (name == "desitter") {
        const double rate = std::sqrt(lambda / 3.0);
        return analytic(
            lambda, [rate](double t) { return std::exp(rate * t); },
            [rate](double t) { return rate * std::exp(rate * t); });
    }
    if (name == "upper") {
        const double rate = std::sqrt((kEightPi * rho0 + lambda) / 3.0);
        return analytic(
            lambda, [rate](double t) { return std::exp(rate * t); },
            [rate](double t) { return rate * std::exp(rate * t); });
    }
    throw std::invalid_argument("unknown scale-factor preset: " + name);
}

ScaleFactorModel ScaleFactorModel::analytic(double lambda, std::function<double(double)> R,
                                            std::function<double(double)> Rdot) {
    ScaleFactorModel m;
    m.lambda_ = lambda;
    m.R_fn_ = std::move(R);
    m.Rdot_fn_ = std::move(Rdot);
    if (std::abs(m.R_fn_(0.0) - 1.0) > 1e-12)
        throw std::invalid_argument("scale factor must be normalized to R(0) = 1");
    if (!(m.Rdot_fn_(0.0) > 0.0))
        throw std::invalid_argument("scale factor must be initially expanding");
    return m;
}

ScaleFactorModel ScaleFactorModel::coupled(double lambda, double rho0, double P0) {
    if (!(lambda > 0.0)) throw std::domain_error("cosmological constant must be positive");
    ScaleFactorModel m;
    m.coupled_ = true;
    m.lambda_ = lambda;
    m.state_ = {0.0, 1.0, rho0, P0};
    return m;
}

double ScaleFactorModel::R(double t) const {
    if (coupled_) return state_.R;
    return R_fn_(t);
}

double ScaleFactorModel::Rdot(double t) const {
    if (coupled_) return state_.R * hubble_rate(state_, lambda_);
    return Rdot_fn_(t);
}

void ScaleFactorModel::advance(double dt, const MatterSource& matter) {
    if (!coupled_) throw std::logic_error("advance() is only meaningful in coupled mode");
    state_ = friedmann_step(state_, lambda_, dt, 0.0, &matter);
}

SandwichBounds sandwich_bounds(double t, double lambda, double rho0) {
    const double c1 = lambda / 3.0;
    const double c2 = (kEightPi * rho0 + lambda) / 3.0;
    return {std::exp(std::sqrt(c1) * t), std::exp(std::sqrt(c2) * t)};
}

}  // namespace flrwb
