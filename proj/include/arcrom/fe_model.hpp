#pragma once

#include <array>
#include <string>
#include <vector>

#include "arcrom/types.hpp"

namespace arcrom::fe {

/// Linear elastic beam material and cross-section data.
struct Material {
    double youngs_modulus = 0.0;  // Pa
    double density = 0.0;         // kg/m^3
    double area = 0.0;            // m^2
    double second_moment = 0.0;   // m^4

    /// Thickness of the rectangular section with the same A and I.
    double thickness_equivalent() const;

    /// Throws std::invalid_argument unless all fields are strictly positive.
    void validate() const;
};

/// Shallow-arch beam mesh with von Karman kinematics.
///
/// Nodes carry (x, elevation); each node has dofs (u, w, theta) in that
/// order. Constraints are applied by elimination: the model keeps a map
/// between the full dof numbering (3*node + component) and the free dof
/// numbering used by every vector/matrix the model exposes.
class FeModel {
public:
    struct Node {
        double x = 0.0;
        double elevation = 0.0;
    };
    struct Element {
        int n1 = -1;
        int n2 = -1;
    };

    FeModel() = default;
    FeModel(std::vector<Node> nodes, std::vector<Element> elements,
            Material material, std::vector<int> constrained_full_dofs);

    /// Parses the line-based mesh format:
    ///   node <x> <elevation>     (node ids are 1-based in file order)
    ///   elem <n1> <n2>
    ///   clamp <nodeid>           (constrains u, w, theta of that node)
    /// Lines starting with '#' and blank lines are ignored.
    static FeModel from_mesh_file(const std::string& path, const Material& material);

    void write_mesh_file(const std::string& path) const;

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int element_count() const { return static_cast<int>(elements_.size()); }
    int free_dof_count() const { return n_free_; }
    int full_dof_count() const { return 3 * node_count(); }

    const Material& material() const { return material_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<int>& constrained_dofs() const { return constrained_; }

    const Element& element(int e) const;
    double element_length(int e) const;
    /// Initial slope w0' = (z2 - z1) / L, constant within the element.
    double element_slope0(int e) const;

    /// Free-dof index of each of the 6 element dofs, -1 where constrained.
    std::array<int, 6> element_free_dofs(int e) const;

    /// Element displacement vector gathered from a free-dof vector
    /// (constrained entries are zero).
    Vec6 gather(const Vec& q_free, int e) const;

    /// Rows of a free-dof-by-m matrix restricted to the element dofs;
    /// constrained dofs give zero rows.
    Mat restrict_rows(const Mat& v_free, int e) const;

    int full_to_free(int full_dof) const { return full_to_free_[full_dof]; }
    int free_to_full(int free_dof) const { return free_to_full_[free_dof]; }

    /// True for u and w dofs, false for theta (free-dof index).
    bool is_translational(int free_dof) const { return free_to_full_[free_dof] % 3 != 2; }

    /// Free dof index of a given node/component (0=u, 1=w, 2=theta), -1 if constrained.
    int node_dof(int node, int component) const { return full_to_free_[3 * node + component]; }

private:
    void finalize();

    std::vector<Node> nodes_;
    std::vector<Element> elements_;
    Material material_;
    std::vector<int> constrained_;    // full dof indices, sorted unique
    std::vector<int> full_to_free_;   // -1 where constrained
    std::vector<int> free_to_full_;
    int n_free_ = 0;
};

/// Clamped(-clamped) parabolic arch test geometry: n_elements equal spans over
/// [0, length], elevation z(x) = 4 * rise * x * (length - x) / length^2.
FeModel make_arch_beam(int n_elements, double length, double rise, const Material& material,
                       bool clamp_left = true, bool clamp_right = true);

/// Sub-model with the same nodes and constraints but only the given elements
/// (ids refer to the source model; the result's element e maps to ids[e]).
FeModel restrict_to_elements(const FeModel& model, const std::vector<int>& element_ids);

}  // namespace arcrom::fe
