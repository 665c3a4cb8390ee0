#include "arcrom/assembly.hpp"

#include "arcrom/vk_beam.hpp"

namespace arcrom::fe {

namespace {

template <class ElementMatrix>
SpMat scatter_matrices(const FeModel& model, const ElementMatrix& matrix_of) {
    const int n = model.free_dof_count();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(model.element_count()) * 36);
    for (int e = 0; e < model.element_count(); ++e) {
        const Mat6 k_e = matrix_of(e);
        const auto dofs = model.element_free_dofs(e);
        for (int a = 0; a < 6; ++a) {
            if (dofs[a] < 0) continue;
            for (int b = 0; b < 6; ++b) {
                if (dofs[b] < 0) continue;
                trips.emplace_back(dofs[a], dofs[b], k_e(a, b));
            }
        }
    }
    SpMat out(n, n);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

AssembledState assemble(const FeModel& model, const Vec& q) {
    return {assemble_internal_force(model, q), assemble_tangent(model, q)};
}

Vec assemble_internal_force(const FeModel& model, const Vec& q) {
    Vec f = Vec::Zero(model.free_dof_count());
    for (int e = 0; e < model.element_count(); ++e) {
        const Vec6 f_e = element_internal_force(model, e, model.gather(q, e));
        const auto dofs = model.element_free_dofs(e);
        for (int a = 0; a < 6; ++a) {
            if (dofs[a] >= 0) f[dofs[a]] += f_e[a];
        }
    }
    return f;
}

SpMat assemble_tangent(const FeModel& model, const Vec& q) {
    return scatter_matrices(model, [&](int e) {
        return element_tangent_stiffness(model, e, model.gather(q, e));
    });
}

SpMat assemble_linear_stiffness(const FeModel& model) {
    return scatter_matrices(model, [&](int e) { return element_linear_stiffness(model, e); });
}

SpMat assemble_mass(const FeModel& model) {
    return scatter_matrices(model, [&](int e) { return element_mass(model, e); });
}

double strain_energy(const FeModel& model, const Vec& q) {
    double u = 0.0;
    for (int e = 0; e < model.element_count(); ++e) {
        u += element_strain_energy(model, e, model.gather(q, e));
    }
    return u;
}

std::vector<Vec6> element_forces(const FeModel& model, const Vec& q) {
    std::vector<Vec6> forces(model.element_count());
    for (int e = 0; e < model.element_count(); ++e) {
        forces[e] = element_internal_force(model, e, model.gather(q, e));
    }
    return forces;
}

std::vector<Mat6> element_linear_stiffnesses(const FeModel& model) {
    std::vector<Mat6> mats(model.element_count());
    for (int e = 0; e < model.element_count(); ++e) {
        mats[e] = element_linear_stiffness(model, e);
    }
    return mats;
}

Vec uniform_pressure_load(const FeModel& model) {
    const Material& mat = model.material();
    const double width = mat.area / mat.thickness_equivalent();
    Vec p = Vec::Zero(model.free_dof_count());
    for (int e = 0; e < model.element_count(); ++e) {
        const Vec6 f_e = width * element_unit_transverse_load(model, e);
        const auto dofs = model.element_free_dofs(e);
        for (int a = 0; a < 6; ++a) {
            if (dofs[a] >= 0) p[dofs[a]] += f_e[a];
        }
    }
    return p;
}

}  // namespace arcrom::fe
