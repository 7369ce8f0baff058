#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flrwb/collision_operator.hpp"
#include "flrwb/diagnostics.hpp"
#include "flrwb/sim_config.hpp"
#include "flrwb/spacetime.hpp"

namespace flrwb {

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimState {
    double t = 0.0;
    std::int64_t step_count = 0;
    DistributionGrid f;
    ScaleFactorModel spacetime;

    SimState(DistributionGrid grid, ScaleFactorModel model)
        : f(std::move(grid)), spacetime(std::move(model)) {}
};

struct PicardResult {
    std::vector<double> f_new;
    double residual = 0.0;  // max-norm change of the last sweep (two or more sweeps)
    std::uint64_t leakage = 0;
};

/// One semi-implicit update at fixed scale factor: per lattice point
///   f_new = (f_old + dt * gain(f_prev)) / (1 + dt * L(f_prev)),
/// swept `iters` times with f_prev refreshed each sweep. Nonnegative by
/// construction for nonnegative input.
PicardResult picard_update(const DistributionGrid& f, const CollisionOperator& op,
                           double scale_factor, double dt, int iters);

struct StepResult {
    double dt_used = 0.0;
    double residual = 0.0;
    std::uint64_t leakage = 0;
    int halvings = 0;
};

/// Time evolution driver. Holds the state, the collision operator, and the
/// expansion model; enforces positivity and the exponential sandwich bounds
/// at every accepted step.
class Solver {
  public:
    explicit Solver(const SimConfig& config);

    /// One accepted step. Halves dt on a stalled fixed point (up to 8 times)
    /// and keeps the reduced dt; throws StepError when the step cannot be
    /// accepted.
    StepResult step();

    /// Advances to the horizon, emitting one record per output interval.
    std::vector<DiagnosticsRecord> run();

    const SimState& state() const { return state_; }
    const SimConfig& config() const { return cfg_; }
    const CollisionOperator& op() const { return op_; }
    double current_dt() const { return dt_; }
    double initial_density() const { return rho0_; }

    DiagnosticsRecord make_record() const;

  private:
    SimConfig cfg_;
    CollisionOperator op_;
    SimState state_;
    double dt_;
    double rho0_;
    std::uint64_t last_leakage_ = 0;
};

/// Fills continuity_residual on a record series: rho_dot + 3 (Rdot/R)(rho+P)
/// with rho_dot from centered differences of the recorded densities.
void fill_continuity_residuals(std::vector<DiagnosticsRecord>& records,
                               const std::vector<double>& hubble);

/// CSV rendering of a record series; floats carry 17 significant digits.
std::string records_to_csv(const std::vector<DiagnosticsRecord>& records,
                           const std::vector<NormSpec>& norms);
void write_csv(const std::string& path, const std::string& csv_text);

}  // namespace flrwb
