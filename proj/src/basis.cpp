#include "arcrom/basis.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace arcrom::modal {

ReductionBasis build_basis(const SpMat& mass, const ModeSet& modes,
                           const std::vector<int>& selected_vms,
                           const std::vector<SmdEntry>& smds) {
    const int n = static_cast<int>(modes.shapes.rows());
    const int m = static_cast<int>(selected_vms.size() + smds.size());
    if (m < 1) throw std::invalid_argument("basis: empty selection");

    Mat v(n, m);
    std::vector<BasisLabel> labels;
    labels.reserve(m);
    int col = 0;
    for (int idx : selected_vms) {
        if (idx < 0 || idx >= modes.count()) throw std::invalid_argument("basis: VM index out of range");
        v.col(col++) = modes.shapes.col(idx);
        labels.push_back({BasisLabel::Kind::vm, idx, idx});
    }
    for (const SmdEntry& smd : smds) {
        if (smd.theta.size() != n) throw std::invalid_argument("basis: SMD size mismatch");
        const double norm = smd.theta.norm();
        if (!(norm > 0.0)) throw std::invalid_argument("basis: zero SMD vector");
        v.col(col++) = smd.theta / norm;
        labels.push_back({BasisLabel::Kind::smd, smd.i, smd.j});
    }

    // Two-pass modified Gram-Schmidt in the M inner product.
    Mat w(n, m);
    std::vector<int> kept;
    for (int c = 0; c < m; ++c) {
        Vec wk = v.col(c);
        const double pre = std::sqrt(wk.dot(mass * wk));
        for (int pass = 0; pass < 2; ++pass) {
            for (int k : kept) {
                // w.col(k) is already M-orthonormal.
                wk -= w.col(k).dot(mass * wk) * w.col(k);
            }
        }
        const double post = std::sqrt(wk.dot(mass * wk));
        if (post < 1e-8 * pre) {
            std::cerr << "basis: dropping near-dependent column " << c << " (|w|_M/|v|_M = "
                      << post / pre << ")\n";
            continue;
        }
        w.col(static_cast<int>(kept.size())) = wk / post;
        kept.push_back(c);
    }

    ReductionBasis basis;
    const int m_kept = static_cast<int>(kept.size());
    basis.V = Mat(n, m_kept);
    basis.W = w.leftCols(m_kept);
    basis.labels.reserve(m_kept);
    for (int c = 0; c < m_kept; ++c) {
        basis.V.col(c) = v.col(kept[c]);
        basis.labels.push_back(labels[kept[c]]);
    }
    basis.U = basis.V.colPivHouseholderQr().solve(basis.W);
    return basis;
}

}  // namespace arcrom::modal
