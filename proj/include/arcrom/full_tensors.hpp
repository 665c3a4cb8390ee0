#pragma once

#include <array>
#include <vector>

#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::fe {

/// Dense reduced tensors produced by projecting FullTensors on a basis;
/// flat row-major storage, fully symmetric in the trailing indices.
struct DenseReducedTensors {
    int m = 0;
    Mat k1;                   // m x m
    std::vector<double> k2;   // m^3
    std::vector<double> k3;   // m^4
    double& k2_at(int i, int j, int k) { return k2[(static_cast<std::size_t>(i) * m + j) * m + k]; }
    double k2_at(int i, int j, int k) const { return k2[(static_cast<std::size_t>(i) * m + j) * m + k]; }
    double& k3_at(int i, int j, int k, int l) {
        return k3[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l];
    }
    double k3_at(int i, int j, int k, int l) const {
        return k3[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l];
    }
};

/// Exact decomposition f(q) = K1 q + K2:(q(x)q) + K3:.(q(x)q(x)q) of the
/// assembled internal force, stored element-wise (the tensors are sparse by
/// element support). K2 and K3 blocks are fully symmetric in all indices.
class FullTensors {
public:
    static FullTensors extract(const FeModel& model);

    int free_dof_count() const { return n_; }
    int element_count() const { return static_cast<int>(dofs_.size()); }

    const SpMat& k1() const { return k1_; }

    /// Reconstructs the assembled force from the stored decomposition.
    Vec force(const Vec& q) const;
    /// Quadratic part K2:(q(x)q) alone.
    Vec quadratic_force(const Vec& q) const;
    /// Cubic part K3:.(q(x)q(x)q) alone.
    Vec cubic_force(const Vec& q) const;

    /// Global tensor entries, summed over elements that support all indices.
    double k2_entry(int i, int j, int k) const;
    double k3_entry(int i, int j, int k, int l) const;

    /// Projects onto a free-dof basis V (n x m), element block by element block.
    DenseReducedTensors project(const Mat& v) const;

private:
    int n_ = 0;
    SpMat k1_;
    std::vector<std::array<int, 6>> dofs_;   // free dof ids per element (-1 constrained)
    std::vector<std::array<double, 216>> k2_;   // 6^3 per element
    std::vector<std::array<double, 1296>> k3_;  // 6^4 per element
};

}  // namespace arcrom::fe
