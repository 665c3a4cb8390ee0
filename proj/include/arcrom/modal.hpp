#pragma once

#include <utility>
#include <vector>

#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::modal {

/// Mass-normalized vibration modes, ascending frequency.
struct ModeSet {
    Mat shapes;                // n x k, columns phi_i
    Vec angular_frequencies;   // rad/s
    int count() const { return static_cast<int>(shapes.cols()); }
};

/// Lowest k eigenpairs of (K1, M). Dense Cholesky-reduced solve.
ModeSet solve_vibration_modes(const fe::FeModel& model, int k);

/// sMPF_i = (phi_i' p) / (phi_i' K1 phi_i) * ||phi_i||_2.
Vec static_mpf(const Mat& shapes, const SpMat& k1, const Vec& p);
Vec static_mpf(const ModeSet& modes, const SpMat& k1, const Vec& p);

/// Static modal derivatives via central differences of the tangent
/// stiffness (black-box tangent output only). Shares one factorization
/// of K1 across pairs.
class SmdComputer {
public:
    /// step <= 0 selects per-mode steps h_i so that the largest translational
    /// component of h_i * phi_i is 10% of the section thickness equivalent.
    SmdComputer(const fe::FeModel& model, const ModeSet& modes, double step = 0.0);

    /// theta_ij solving K1 theta = -[(Kt(h phi_i) - Kt(-h phi_i)) / 2h] phi_j.
    Vec compute(int i, int j) const;

private:
    const fe::FeModel& model_;
    const ModeSet& modes_;
    double step_;
    Vec auto_steps_;
    Eigen::SimplicialLDLT<SpMat> k1_solver_;
};

Vec compute_smd(const fe::FeModel& model, const ModeSet& modes, int i, int j, double step = 0.0);

/// All (lo <= hi) pairs of the given sMPF entries ranked by descending
/// |sMPF_lo * sMPF_hi| (mode signs are arbitrary), ties lexicographic.
std::vector<std::pair<int, int>> mdpf_rank(const Vec& smpf);
std::vector<std::pair<int, int>> mdpf_rank(const Vec& smpf,
                                           std::vector<std::pair<int, int>> pairs);

/// Least-squares fit of 0.5 (alpha / w_i + beta w_i) = zeta over the given
/// angular frequencies; minimum-norm solution when underdetermined.
std::pair<double, double> rayleigh_fit(const Vec& angular_frequencies, double zeta);

}  // namespace arcrom::modal
