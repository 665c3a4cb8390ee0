#pragma once

#include "arcrom/fe_model.hpp"
#include "arcrom/modal.hpp"
#include "arcrom/tensor_set.hpp"
#include "arcrom/types.hpp"

namespace arcrom::rom {

/// Integrable reduced model: projected mass/damping, cubic force tensors
/// and the reduced spatial load shape.
struct RomModel {
    Mat mass;
    Mat damping;
    ident::TensorSet tensors;
    Vec load_shape;
    int size() const { return tensors.m(); }
};

inline Vec reduced_force(const ident::TensorSet& tensors, const Vec& eta) {
    return tensors.force(eta);
}

inline Mat reduced_jacobian(const ident::TensorSet& tensors, const Vec& eta) {
    return tensors.jacobian(eta);
}

/// ROM of the linearized model on the first k VMs: zero nonlinear tensors,
/// Rayleigh damping alpha M + beta K1 in reduced space.
RomModel linear_rom(const fe::FeModel& model, const modal::ModeSet& modes, int k, const Vec& p,
                    double rayleigh_alpha, double rayleigh_beta);

}  // namespace arcrom::rom
