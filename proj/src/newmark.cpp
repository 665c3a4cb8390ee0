#include "arcrom/newmark.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "arcrom/assembly.hpp"

namespace arcrom::rom {

namespace {
std::string failure_message(int step, const std::vector<double>& residuals) {
    std::ostringstream msg;
    msg.precision(3);
    msg << std::scientific << "newmark: Newton did not converge at step " << step
        << " (residuals";
    const std::size_t show = std::min<std::size_t>(residuals.size(), 4);
    for (std::size_t k = residuals.size() - show; k < residuals.size(); ++k) {
        msg << " " << residuals[k];
    }
    msg << ")";
    return msg.str();
}
}  // namespace

NewmarkFailure::NewmarkFailure(int step, std::vector<double> residuals)
    : std::runtime_error(failure_message(step, residuals)),
      step_(step),
      residuals_(std::move(residuals)) {}

namespace {

// Shared implicit Newmark loop; System supplies mass/damping products, the
// internal force and tangent, and the factor/solve policy for the Newton
// matrix S = M / (beta dt^2) + C gamma / (beta dt) + K_t(u).
template <class System>
NewmarkState run(System& sys, const Vec& load_shape, const Amplitude& amplitude, double dt,
                 int n_steps, const NewmarkParams& params, const StepObserver& observer,
                 const NewmarkState* initial) {
    if (!(dt > 0.0)) throw std::invalid_argument("newmark: dt must be positive");
    const int n = sys.size();
    NewmarkState state;
    if (initial) {
        state = *initial;
        if (state.u.size() != n) throw std::invalid_argument("newmark: initial state size mismatch");
        if (state.a.size() != n) {
            state.a = sys.solve_mass(load_shape * amplitude(state.time) -
                                     sys.damping_times(state.v) - sys.internal_force(state.u));
        }
    } else {
        state.u = Vec::Zero(n);
        state.v = Vec::Zero(n);
        state.a = sys.solve_mass(load_shape * amplitude(0.0));
        state.time = 0.0;
    }

    const double beta = params.beta;
    const double gamma = params.gamma;
    for (int step = 1; step <= n_steps; ++step) {
        const double t1 = state.time + dt;
        const Vec f_ext = load_shape * amplitude(t1);
        const double tol = std::max(params.rel_tol * f_ext.norm(), params.abs_tol);

        const Vec u_n = state.u, v_n = state.v, a_n = state.a;
        Vec u = u_n + dt * v_n + dt * dt * (0.5 - beta) * a_n;  // predictor (a = 0)
        std::vector<double> residuals;
        bool converged = false;
        for (int it = 0; it < params.max_iterations; ++it) {
            const Vec a = (u - u_n - dt * v_n - dt * dt * (0.5 - beta) * a_n) / (beta * dt * dt);
            const Vec v = v_n + dt * ((1.0 - gamma) * a_n + gamma * a);
            const Vec f_inertia = sys.mass_times(a);
            const Vec f_damp = sys.damping_times(v);
            const Vec f_int = sys.internal_force(u);
            const Vec r = f_inertia + f_damp + f_int - f_ext;
            residuals.push_back(r.norm());
            // Accept once the force balance holds to eleven digits of the
            // participating force magnitudes; the acceleration recurrence
            // amplifies displacement round-off by 1/(beta dt^2), so the true
            // residual floor sits well above machine epsilon.
            const double floor = 1e-11 * (f_inertia.norm() + f_damp.norm() + f_int.norm() +
                                          f_ext.norm());
            if (residuals.back() <= std::max(tol, floor)) {
                converged = true;
                state.u = u;
                state.v = v;
                state.a = a;
                break;
            }
            sys.factor_newton(u, 1.0 / (beta * dt * dt), gamma / (beta * dt));
            u += sys.solve_newton(Vec(-r));
        }
        if (!converged) throw NewmarkFailure(step, residuals);
        if (params.newton_log) params.newton_log->push_back(residuals);
        state.time = t1;
        if (observer) observer(step, state.time, state.u, state.v);
    }
    return state;
}

struct DenseRomSystem {
    const RomModel& model;
    Eigen::LDLT<Mat> mass_ldlt;
    Eigen::PartialPivLU<Mat> newton_lu;

    explicit DenseRomSystem(const RomModel& m) : model(m), mass_ldlt(m.mass) {}
    int size() const { return model.size(); }
    Vec mass_times(const Vec& x) const { return model.mass * x; }
    Vec damping_times(const Vec& x) const { return model.damping * x; }
    Vec internal_force(const Vec& u) const { return model.tensors.force(u); }
    Vec solve_mass(const Vec& rhs) { return mass_ldlt.solve(rhs); }
    void factor_newton(const Vec& u, double mass_coeff, double damping_coeff) {
        newton_lu.compute(mass_coeff * model.mass + damping_coeff * model.damping +
                          model.tensors.jacobian(u));
    }
    Vec solve_newton(const Vec& rhs) const { return newton_lu.solve(rhs); }
};

struct SparseHfmSystem {
    const fe::FeModel& model;
    SpMat mass, k1, damping;
    Eigen::SimplicialLDLT<SpMat> mass_ldlt;
    Eigen::SimplicialLDLT<SpMat> newton_ldlt;
    bool pattern_ready = false;

    SparseHfmSystem(const fe::FeModel& m, double alpha, double beta)
        : model(m),
          mass(fe::assemble_mass(m)),
          k1(fe::assemble_linear_stiffness(m)),
          damping(alpha * mass + beta * k1) {
        mass_ldlt.compute(mass);
    }
    int size() const { return model.free_dof_count(); }
    Vec mass_times(const Vec& x) const { return mass * x; }
    Vec damping_times(const Vec& x) const { return damping * x; }
    Vec internal_force(const Vec& u) const { return fe::assemble_internal_force(model, u); }
    Vec solve_mass(const Vec& rhs) { return mass_ldlt.solve(rhs); }
    void factor_newton(const Vec& u, double mass_coeff, double damping_coeff) {
        const SpMat s = mass_coeff * mass + damping_coeff * damping + fe::assemble_tangent(model, u);
        if (!pattern_ready) {
            newton_ldlt.analyzePattern(s);
            pattern_ready = true;
        }
        newton_ldlt.factorize(s);
    }
    Vec solve_newton(const Vec& rhs) const { return newton_ldlt.solve(rhs); }
};

}  // namespace

NewmarkState integrate_rom(const RomModel& model, const Amplitude& amplitude, double dt,
                           int n_steps, const NewmarkParams& params, const StepObserver& observer,
                           const NewmarkState* initial) {
    DenseRomSystem sys(model);
    return run(sys, model.load_shape, amplitude, dt, n_steps, params, observer, initial);
}

NewmarkState integrate_hfm(const fe::FeModel& model, const Vec& load_shape,
                           const Amplitude& amplitude, double rayleigh_alpha,
                           double rayleigh_beta, double dt, int n_steps,
                           const NewmarkParams& params, const StepObserver& observer,
                           const NewmarkState* initial) {
    SparseHfmSystem sys(model, rayleigh_alpha, rayleigh_beta);
    return run(sys, load_shape, amplitude, dt, n_steps, params, observer, initial);
}

void write_state(const NewmarkState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("newmark: cannot write " + path);
    out.precision(17);
    out << "time " << state.time << "\n";
    out << "size " << state.u.size() << "\n";
    for (long i = 0; i < state.u.size(); ++i) {
        out << state.u[i] << " " << state.v[i] << " " << state.a[i] << "\n";
    }
}

NewmarkState read_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("newmark: cannot open " + path);
    NewmarkState state;
    std::string tag;
    long n = 0;
    in >> tag >> state.time >> tag >> n;
    state.u = Vec(n);
    state.v = Vec(n);
    state.a = Vec(n);
    for (long i = 0; i < n; ++i) {
        if (!(in >> state.u[i] >> state.v[i] >> state.a[i])) {
            throw std::runtime_error("newmark: truncated state in " + path);
        }
    }
    return state;
}

}  // namespace arcrom::rom
