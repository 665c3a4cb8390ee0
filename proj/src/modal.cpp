#include "arcrom/modal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arcrom/assembly.hpp"

namespace arcrom::modal {

ModeSet solve_vibration_modes(const fe::FeModel& model, int k) {
    const int n = model.free_dof_count();
    if (k < 1 || k > n) throw std::invalid_argument("modes: k out of range");
    const Mat k1 = Mat(fe::assemble_linear_stiffness(model));
    const Mat m = Mat(fe::assemble_mass(model));
    Eigen::LLT<Mat> mass_chol(m);
    if (mass_chol.info() != Eigen::Success) {
        throw std::runtime_error("modes: mass matrix is not positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> eig(k1, m, Eigen::ComputeEigenvectors |
                                                                 Eigen::Ax_lBx);
    if (eig.info() != Eigen::Success) throw std::runtime_error("modes: eigensolver failed");

    ModeSet out;
    out.shapes = eig.eigenvectors().leftCols(k);
    out.angular_frequencies = eig.eigenvalues().head(k).cwiseMax(0.0).cwiseSqrt();
    // Deterministic sign: largest-magnitude entry positive.
    for (int c = 0; c < k; ++c) {
        int idx = 0;
        out.shapes.col(c).cwiseAbs().maxCoeff(&idx);
        if (out.shapes(idx, c) < 0.0) out.shapes.col(c) *= -1.0;
    }
    return out;
}

Vec static_mpf(const Mat& shapes, const SpMat& k1, const Vec& p) {
    const int k = static_cast<int>(shapes.cols());
    Vec smpf(k);
    for (int i = 0; i < k; ++i) {
        const Vec phi = shapes.col(i);
        smpf[i] = phi.dot(p) / phi.dot(k1 * phi) * phi.norm();
    }
    return smpf;
}

Vec static_mpf(const ModeSet& modes, const SpMat& k1, const Vec& p) {
    return static_mpf(modes.shapes, k1, p);
}

SmdComputer::SmdComputer(const fe::FeModel& model, const ModeSet& modes, double step)
    : model_(model), modes_(modes), step_(step) {
    const SpMat k1 = fe::assemble_linear_stiffness(model);
    k1_solver_.compute(k1);
    const Vec d = k1_solver_.vectorD();
    if (k1_solver_.info() != Eigen::Success ||
        d.cwiseAbs().minCoeff() <= 1e-12 * d.cwiseAbs().maxCoeff()) {
        throw std::runtime_error("smd: K1 is singular (unconstrained model?)");
    }
    if (step <= 0.0) {
        const double target = 0.1 * model.material().thickness_equivalent();
        auto_steps_ = Vec(modes.count());
        for (int i = 0; i < modes.count(); ++i) {
            double max_transl = 0.0;
            for (int d = 0; d < model.free_dof_count(); ++d) {
                if (model.is_translational(d)) {
                    max_transl = std::max(max_transl, std::abs(modes.shapes(d, i)));
                }
            }
            if (max_transl == 0.0) throw std::runtime_error("smd: mode has no translational part");
            auto_steps_[i] = target / max_transl;
        }
    }
}

Vec SmdComputer::compute(int i, int j) const {
    if (i < 0 || i >= modes_.count() || j < 0 || j >= modes_.count()) {
        throw std::invalid_argument("smd: mode index out of range");
    }
    const double h = step_ > 0.0 ? step_ : auto_steps_[i];
    const Vec phi_i = modes_.shapes.col(i);
    const Vec phi_j = modes_.shapes.col(j);
    const SpMat kt_plus = fe::assemble_tangent(model_, h * phi_i);
    const SpMat kt_minus = fe::assemble_tangent(model_, -h * phi_i);
    const Vec rhs = -((kt_plus - kt_minus) * phi_j) / (2.0 * h);
    const Vec theta = k1_solver_.solve(rhs);
    if (k1_solver_.info() != Eigen::Success) throw std::runtime_error("smd: K1 solve failed");
    return theta;
}

Vec compute_smd(const fe::FeModel& model, const ModeSet& modes, int i, int j, double step) {
    return SmdComputer(model, modes, step).compute(i, j);
}

std::vector<std::pair<int, int>> mdpf_rank(const Vec& smpf) {
    std::vector<std::pair<int, int>> pairs;
    const int k = static_cast<int>(smpf.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) pairs.emplace_back(i, j);
    }
    return mdpf_rank(smpf, std::move(pairs));
}

std::vector<std::pair<int, int>> mdpf_rank(const Vec& smpf,
                                           std::vector<std::pair<int, int>> pairs) {
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        const double va = std::abs(smpf[a.first] * smpf[a.second]);
        const double vb = std::abs(smpf[b.first] * smpf[b.second]);
        if (va != vb) return va > vb;
        return a < b;
    });
    return pairs;
}

std::pair<double, double> rayleigh_fit(const Vec& angular_frequencies, double zeta) {
    const int k = static_cast<int>(angular_frequencies.size());
    if (k < 1) throw std::invalid_argument("rayleigh: need at least one frequency");
    Mat a(k, 2);
    Vec b = Vec::Constant(k, zeta);
    for (int i = 0; i < k; ++i) {
        const double w = angular_frequencies[i];
        if (!(w > 0.0)) throw std::invalid_argument("rayleigh: frequencies must be positive");
        a(i, 0) = 0.5 / w;
        a(i, 1) = 0.5 * w;
    }
    const Vec x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    return {x[0], x[1]};
}

}  // namespace arcrom::modal
