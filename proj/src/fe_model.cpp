#include "arcrom/fe_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace arcrom::fe {

double Material::thickness_equivalent() const {
    return std::sqrt(12.0 * second_moment / area);
}

void Material::validate() const {
    if (!(youngs_modulus > 0.0) || !(density > 0.0) || !(area > 0.0) || !(second_moment > 0.0)) {
        throw std::invalid_argument("material: all properties must be strictly positive");
    }
}

FeModel::FeModel(std::vector<Node> nodes, std::vector<Element> elements, Material material,
                 std::vector<int> constrained_full_dofs)
    : nodes_(std::move(nodes)), elements_(std::move(elements)), material_(material) {
    material_.validate();
    std::set<int> unique(constrained_full_dofs.begin(), constrained_full_dofs.end());
    constrained_.assign(unique.begin(), unique.end());
    finalize();
}

void FeModel::finalize() {
    const int n_full = full_dof_count();
    if (nodes_.empty()) throw std::invalid_argument("model: no nodes");
    for (const Element& e : elements_) {
        if (e.n1 < 0 || e.n1 >= node_count() || e.n2 < 0 || e.n2 >= node_count()) {
            throw std::invalid_argument("model: element references invalid node");
        }
        if (!(nodes_[e.n2].x - nodes_[e.n1].x > 0.0)) {
            throw std::invalid_argument("model: element length must be positive");
        }
    }
    for (int d : constrained_) {
        if (d < 0 || d >= n_full) throw std::invalid_argument("model: constrained dof out of range");
    }
    full_to_free_.assign(n_full, -1);
    free_to_full_.clear();
    std::set<int> constrained(constrained_.begin(), constrained_.end());
    for (int d = 0; d < n_full; ++d) {
        if (!constrained.count(d)) {
            full_to_free_[d] = static_cast<int>(free_to_full_.size());
            free_to_full_.push_back(d);
        }
    }
    n_free_ = static_cast<int>(free_to_full_.size());
    if (n_free_ == 0) throw std::invalid_argument("model: no free dofs left");
}

FeModel FeModel::from_mesh_file(const std::string& path, const Material& material) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mesh: cannot open " + path);
    std::vector<Node> nodes;
    std::vector<Element> elements;
    std::vector<int> constrained;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "node") {
            Node n;
            if (!(ls >> n.x >> n.elevation))
                throw std::runtime_error("mesh: bad node record at line " + std::to_string(lineno));
            nodes.push_back(n);
        } else if (tag == "elem") {
            int n1 = 0, n2 = 0;
            if (!(ls >> n1 >> n2))
                throw std::runtime_error("mesh: bad elem record at line " + std::to_string(lineno));
            elements.push_back({n1 - 1, n2 - 1});
        } else if (tag == "clamp") {
            int node = 0;
            if (!(ls >> node))
                throw std::runtime_error("mesh: bad clamp record at line " + std::to_string(lineno));
            for (int c = 0; c < 3; ++c) constrained.push_back(3 * (node - 1) + c);
        } else {
            throw std::runtime_error("mesh: unknown record '" + tag + "' at line " +
                                     std::to_string(lineno));
        }
    }
    return FeModel(std::move(nodes), std::move(elements), material, std::move(constrained));
}

void FeModel::write_mesh_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh: cannot write " + path);
    out.precision(17);
    for (const Node& n : nodes_) out << "node " << n.x << " " << n.elevation << "\n";
    for (const Element& e : elements_) out << "elem " << e.n1 + 1 << " " << e.n2 + 1 << "\n";
    // Only fully clamped nodes are expressible in the mesh format.
    for (int node = 0; node < node_count(); ++node) {
        bool all = true;
        for (int c = 0; c < 3; ++c) {
            if (full_to_free_[3 * node + c] != -1) all = false;
        }
        if (all) out << "clamp " << node + 1 << "\n";
    }
}

const FeModel::Element& FeModel::element(int e) const {
    if (e < 0 || e >= element_count()) throw std::out_of_range("model: invalid element id");
    return elements_[e];
}

double FeModel::element_length(int e) const {
    const Element& el = element(e);
    return nodes_[el.n2].x - nodes_[el.n1].x;
}

double FeModel::element_slope0(int e) const {
    const Element& el = element(e);
    return (nodes_[el.n2].elevation - nodes_[el.n1].elevation) / element_length(e);
}

std::array<int, 6> FeModel::element_free_dofs(int e) const {
    const Element& el = element(e);
    std::array<int, 6> dofs{};
    for (int c = 0; c < 3; ++c) {
        dofs[c] = full_to_free_[3 * el.n1 + c];
        dofs[3 + c] = full_to_free_[3 * el.n2 + c];
    }
    return dofs;
}

Vec6 FeModel::gather(const Vec& q_free, int e) const {
    const auto dofs = element_free_dofs(e);
    Vec6 q_e = Vec6::Zero();
    for (int a = 0; a < 6; ++a) {
        if (dofs[a] >= 0) q_e[a] = q_free[dofs[a]];
    }
    return q_e;
}

Mat FeModel::restrict_rows(const Mat& v_free, int e) const {
    const auto dofs = element_free_dofs(e);
    Mat v_e = Mat::Zero(6, v_free.cols());
    for (int a = 0; a < 6; ++a) {
        if (dofs[a] >= 0) v_e.row(a) = v_free.row(dofs[a]);
    }
    return v_e;
}

FeModel make_arch_beam(int n_elements, double length, double rise, const Material& material,
                       bool clamp_left, bool clamp_right) {
    if (n_elements < 1) throw std::invalid_argument("make_arch_beam: need at least one element");
    std::vector<FeModel::Node> nodes(n_elements + 1);
    for (int i = 0; i <= n_elements; ++i) {
        const double x = length * static_cast<double>(i) / n_elements;
        nodes[i] = {x, 4.0 * rise * x * (length - x) / (length * length)};
    }
    std::vector<FeModel::Element> elements(n_elements);
    for (int e = 0; e < n_elements; ++e) elements[e] = {e, e + 1};
    std::vector<int> constrained;
    if (clamp_left) {
        for (int c = 0; c < 3; ++c) constrained.push_back(c);
    }
    if (clamp_right) {
        for (int c = 0; c < 3; ++c) constrained.push_back(3 * n_elements + c);
    }
    return FeModel(std::move(nodes), std::move(elements), material, std::move(constrained));
}

FeModel restrict_to_elements(const FeModel& model, const std::vector<int>& element_ids) {
    std::vector<FeModel::Element> elements;
    elements.reserve(element_ids.size());
    for (int e : element_ids) elements.push_back(model.element(e));
    return FeModel(model.nodes(), std::move(elements), model.material(), model.constrained_dofs());
}

}  // namespace arcrom::fe
