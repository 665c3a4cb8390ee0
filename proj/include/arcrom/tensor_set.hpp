#pragma once

#include <string>

#include "arcrom/types.hpp"

namespace arcrom::ident {

enum class BasisTag { V, W };

/// Reduced operators of the cubic force polynomial in unique-monomial form:
///   f_i = K1r_ij eta_j + sum_{j<=k} K2r_{ijk} eta_j eta_k
///         + sum_{j<=k<=l} K3r_{ijkl} eta_j eta_k eta_l,
/// one coefficient per monomial (entries outside j<=k<=l are zero by
/// construction and not stored).
class TensorSet {
public:
    TensorSet() = default;
    TensorSet(int m, BasisTag tag);

    int m() const { return m_; }
    BasisTag tag() const { return tag_; }
    void set_tag(BasisTag tag) { tag_ = tag; }

    int pair_count() const { return m_ * (m_ + 1) / 2; }
    int triple_count() const { return m_ * (m_ + 1) * (m_ + 2) / 6; }

    int pair_index(int j, int k) const;          // j <= k
    int triple_index(int j, int k, int l) const; // j <= k <= l

    Mat& k1() { return k1_; }
    const Mat& k1() const { return k1_; }
    Mat& k2() { return k2_; }                    // m x pair_count
    const Mat& k2() const { return k2_; }
    Mat& k3() { return k3_; }                    // m x triple_count
    const Mat& k3() const { return k3_; }

    double& k2_at(int i, int j, int k) { return k2_(i, pair_index(j, k)); }
    double k2_at(int i, int j, int k) const { return k2_(i, pair_index(j, k)); }
    double& k3_at(int i, int j, int k, int l) { return k3_(i, triple_index(j, k, l)); }
    double k3_at(int i, int j, int k, int l) const { return k3_(i, triple_index(j, k, l)); }

    /// Reduced internal force at eta.
    Vec force(const Vec& eta) const;
    /// Analytic Jacobian of force at eta (the reduced tangent stiffness).
    Mat jacobian(const Vec& eta) const;

private:
    int m_ = 0;
    BasisTag tag_ = BasisTag::V;
    Mat k1_, k2_, k3_;
};

/// Text format: "m <m>" / "basis <V|W>" header, then sorted
/// "order i j [k [l]] value" lines (1-based indices, nonzeros only),
/// printed with enough digits for an exact decimal round trip.
void write_tensor_set(const TensorSet& set, const std::string& path);
TensorSet read_tensor_set(const std::string& path);

}  // namespace arcrom::ident
