#pragma once

#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::fe {

// 2-node von Karman shallow-arch beam element. Per node dofs (u, w, theta),
// linear axial and cubic Hermite transverse interpolation. Axial strain
// eps = u' + w0' w' + (w')^2 / 2 with the initial slope w0' taken constant
// per element, curvature kappa = w''. Strain energy
//   U_e = int 0.5 EA eps^2 + 0.5 EI (w'')^2 dx,
// so the nodal force is an exact cubic polynomial in the element dofs.
// All integrands have polynomial degree <= 8 in the element coordinate and
// are integrated exactly with 5-point Gauss-Legendre quadrature.

double element_strain_energy(const FeModel& model, int element_id, const Vec6& q_e);

Vec6 element_internal_force(const FeModel& model, int element_id, const Vec6& q_e);

Mat6 element_tangent_stiffness(const FeModel& model, int element_id, const Vec6& q_e);

Mat6 element_linear_stiffness(const FeModel& model, int element_id);

/// Consistent mass from rho*A (translational shape functions only; rotary
/// inertia of the cross-section is neglected).
Mat6 element_mass(const FeModel& model, int element_id);

/// Consistent nodal load of a unit transverse line load (N/m) on the element.
Vec6 element_unit_transverse_load(const FeModel& model, int element_id);

}  // namespace arcrom::fe
