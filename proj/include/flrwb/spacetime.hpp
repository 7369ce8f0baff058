#pragma once

#include <functional>
#include <string>

namespace flrwb {

/// State of the expansion ODE system.
struct FriedmannState {
    double t = 0.0;
    double R = 1.0;    // scale factor, normalized R(0) = 1
    double rho = 0.0;  // energy density
    double P = 0.0;    // pressure
};

/// Expansion rate Rdot/R = +sqrt((8 pi rho + Lambda)/3). Positive root only:
/// initially expanding spacetimes stay expanding.
double hubble_rate(const FriedmannState& state, double lambda);

/// rho_dot = -3 (Rdot/R)(rho + P).
double continuity_rhs(const FriedmannState& state, double lambda);

/// Matter readouts used when the expansion is coupled to a distribution
/// function: density and pressure as functions of the scale factor, with the
/// distribution held fixed across the substages of one step.
struct MatterSource {
    std::function<double(double R)> rho;
    std::function<double(double R)> pressure;
};

/// One classical fourth-order step of the expansion ODE.
///
/// Without matter, evolves (R, rho) with P = eos_w * rho. With matter,
/// evolves R only; rho and P are recomputed from the source at each stage.
/// A step that would produce rho < 0 is rejected and retried with a halved
/// dt (up to 10 times) before throwing.
FriedmannState friedmann_step(const FriedmannState& state, double lambda, double dt,
                              double eos_w = 0.0, const MatterSource* matter = nullptr);

/// Scale-factor model: analytic background or coupled Friedmann state.
class ScaleFactorModel {
  public:
    /// Named analytic presets: "desitter" R = exp(sqrt(Lambda/3) t) and
    /// "upper" R = exp(sqrt((8 pi rho0 + Lambda)/3) t).
    static ScaleFactorModel analytic_preset(const std::string& name, double lambda,
                                            double rho0 = 0.0);
    static ScaleFactorModel analytic(double lambda, std::function<double(double)> R,
                                     std::function<double(double)> Rdot);
    static ScaleFactorModel coupled(double lambda, double rho0, double P0);

    bool is_coupled() const { return coupled_; }
    double lambda() const { return lambda_; }

    double R(double t) const;
    double Rdot(double t) const;

    /// Coupled mode only: advance the Friedmann state by dt.
    void advance(double dt, const MatterSource& matter);

    const FriedmannState& state() const { return state_; }
    void set_state(const FriedmannState& s) { state_ = s; }

  private:
    ScaleFactorModel() = default;
    bool coupled_ = false;
    double lambda_ = 0.0;
    std::function<double(double)> R_fn_;
    std::function<double(double)> Rdot_fn_;
    FriedmannState state_;
};

/// Exponential sandwich bounds: exp(sqrt(Lambda/3) t) <= R <= exp(sqrt(C2) t)
/// with C2 = (8 pi rho0 + Lambda)/3, valid for matter obeying the weak and
/// dominant energy conditions.
struct SandwichBounds {
    double lower = 1.0;
    double upper = 1.0;
    bool holds(double R, double slack = 1e-12) const {
        return R >= lower * (1.0 - slack) && R <= upper * (1.0 + slack);
    }
};

SandwichBounds sandwich_bounds(double t, double lambda, double rho0);

}  // namespace flrwb
