#pragma once

#include <vector>

#include "arcrom/modal.hpp"
#include "arcrom/types.hpp"

namespace arcrom::modal {

struct BasisLabel {
    enum class Kind { vm, smd };
    Kind kind = Kind::vm;
    int i = 0;  // VM index (model mode number, 0-based)
    int j = 0;  // second VM index for SMDs
};

struct SmdEntry {
    int i = 0;
    int j = 0;
    Vec theta;
};

/// Reduction basis: physical V = [selected VMs | SMDs], mass-orthonormalized
/// W, and the change of basis U with V U = W.
struct ReductionBasis {
    Mat V;
    Mat W;
    Mat U;
    std::vector<BasisLabel> labels;
    int m() const { return static_cast<int>(V.cols()); }
};

/// Stacks the selected VMs (mass-normalized) and the given SMDs (scaled to
/// unit norm), orthonormalizes in the M inner product with two-pass modified
/// Gram-Schmidt, and computes U = (V'V)^-1 V'W. Columns whose post-
/// orthogonalization M-norm falls below 1e-8 of the pre-orthogonalization
/// one are dropped from both V and W with a warning.
ReductionBasis build_basis(const SpMat& mass, const ModeSet& modes,
                           const std::vector<int>& selected_vms,
                           const std::vector<SmdEntry>& smds);

}  // namespace arcrom::modal
