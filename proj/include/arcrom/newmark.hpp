#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcrom/fe_model.hpp"
#include "arcrom/rom.hpp"
#include "arcrom/types.hpp"

namespace arcrom::rom {

struct NewmarkParams {
    double beta = 0.25;   // average acceleration
    double gamma = 0.5;
    double rel_tol = 1e-8;   // relative to the external-force norm
    double abs_tol = 1e-12;  // fallback when the load vanishes
    int max_iterations = 25;
    /// Optional sink for per-step Newton residual histories.
    std::vector<std::vector<double>>* newton_log = nullptr;
};

struct NewmarkState {
    double time = 0.0;
    Vec u, v, a;
};

/// Thrown when the Newton loop fails to converge within max_iterations.
class NewmarkFailure : public std::runtime_error {
public:
    NewmarkFailure(int step, std::vector<double> residuals);
    int step() const { return step_; }
    const std::vector<double>& residual_history() const { return residuals_; }

private:
    int step_;
    std::vector<double> residuals_;
};

/// Called after every accepted step with (step index, time, u, v).
using StepObserver = std::function<void(int, double, const Vec&, const Vec&)>;

/// Scalar load amplitude a(t); the spatial shape lives in the system.
using Amplitude = std::function<double(double)>;

NewmarkState integrate_rom(const RomModel& model, const Amplitude& amplitude, double dt,
                           int n_steps, const NewmarkParams& params = {},
                           const StepObserver& observer = {},
                           const NewmarkState* initial = nullptr);

/// Full-model integration with Rayleigh damping C = alpha M + beta K1.
NewmarkState integrate_hfm(const fe::FeModel& model, const Vec& load_shape,
                           const Amplitude& amplitude, double rayleigh_alpha,
                           double rayleigh_beta, double dt, int n_steps,
                           const NewmarkParams& params = {}, const StepObserver& observer = {},
                           const NewmarkState* initial = nullptr);

/// Checkpoint text files with full state vectors.
void write_state(const NewmarkState& state, const std::string& path);
NewmarkState read_state(const std::string& path);

}  // namespace arcrom::rom
