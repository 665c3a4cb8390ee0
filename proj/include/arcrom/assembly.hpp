#pragma once

#include <utility>
#include <vector>

#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::fe {

/// Assembled internal force and tangent stiffness at displacement q (free dofs).
struct AssembledState {
    Vec force;
    SpMat tangent;
};

AssembledState assemble(const FeModel& model, const Vec& q);

Vec assemble_internal_force(const FeModel& model, const Vec& q);

SpMat assemble_tangent(const FeModel& model, const Vec& q);

SpMat assemble_linear_stiffness(const FeModel& model);

/// Consistent mass matrix on the free dofs; symmetric positive definite.
SpMat assemble_mass(const FeModel& model);

double strain_energy(const FeModel& model, const Vec& q);

/// Per-element nodal force vectors at displacement q, in element order.
std::vector<Vec6> element_forces(const FeModel& model, const Vec& q);

/// Per-element linear stiffness matrices, in element order.
std::vector<Mat6> element_linear_stiffnesses(const FeModel& model);

/// Work-equivalent nodal load of a uniform unit pressure (1 Pa) acting
/// transversely, using the equivalent width A / t_eq of the section.
Vec uniform_pressure_load(const FeModel& model);

}  // namespace arcrom::fe
