#include "arcrom/vk_beam.hpp"

#include <array>

namespace arcrom::fe {

namespace {

// 5-point Gauss-Legendre rule mapped to [0, 1]; exact for degree <= 9.
struct GaussPoint {
    double xi;
    double weight;
};

constexpr std::array<GaussPoint, 5> kGauss = {{
    {0.5 * (1.0 - 0.9061798459386640), 0.5 * 0.2369268850561891},
    {0.5 * (1.0 - 0.5384693101056831), 0.5 * 0.4786286704993665},
    {0.5, 0.5 * 0.5688888888888889},
    {0.5 * (1.0 + 0.5384693101056831), 0.5 * 0.4786286704993665},
    {0.5 * (1.0 + 0.9061798459386640), 0.5 * 0.2369268850561891},
}};

struct PointKinematics {
    Vec6 b0;  // eps = b0.q + 0.5 (g.q)^2
    Vec6 g;   // w'
    Vec6 c;   // w''
};

PointKinematics kinematics_at(double xi, double length, double slope0) {
    const double l = length;
    PointKinematics k;
    // Axial: u' from linear shapes.
    Vec6 b = Vec6::Zero();
    b[0] = -1.0 / l;
    b[3] = 1.0 / l;
    // Transverse slope from Hermite shapes, w = H1 w1 + l H2 th1 + H3 w2 + l H4 th2.
    const double h1p = -6.0 * xi + 6.0 * xi * xi;
    const double h2p = 1.0 - 4.0 * xi + 3.0 * xi * xi;
    const double h3p = 6.0 * xi - 6.0 * xi * xi;
    const double h4p = 3.0 * xi * xi - 2.0 * xi;
    k.g = Vec6::Zero();
    k.g[1] = h1p / l;
    k.g[2] = h2p;
    k.g[4] = h3p / l;
    k.g[5] = h4p;
    // Curvature.
    const double h1pp = -6.0 + 12.0 * xi;
    const double h2pp = -4.0 + 6.0 * xi;
    const double h3pp = 6.0 - 12.0 * xi;
    const double h4pp = 6.0 * xi - 2.0;
    k.c = Vec6::Zero();
    k.c[1] = h1pp / (l * l);
    k.c[2] = h2pp / l;
    k.c[4] = h3pp / (l * l);
    k.c[5] = h4pp / l;
    k.b0 = b + slope0 * k.g;
    return k;
}

}  // namespace

double element_strain_energy(const FeModel& model, int element_id, const Vec6& q_e) {
    const double l = model.element_length(element_id);
    const double s0 = model.element_slope0(element_id);
    const Material& mat = model.material();
    const double ea = mat.youngs_modulus * mat.area;
    const double ei = mat.youngs_modulus * mat.second_moment;
    double u = 0.0;
    for (const GaussPoint& gp : kGauss) {
        const PointKinematics k = kinematics_at(gp.xi, l, s0);
        const double wp = k.g.dot(q_e);
        const double eps = k.b0.dot(q_e) + 0.5 * wp * wp;
        const double kappa = k.c.dot(q_e);
        u += gp.weight * l * (0.5 * ea * eps * eps + 0.5 * ei * kappa * kappa);
    }
    return u;
}

Vec6 element_internal_force(const FeModel& model, int element_id, const Vec6& q_e) {
    const double l = model.element_length(element_id);
    const double s0 = model.element_slope0(element_id);
    const Material& mat = model.material();
    const double ea = mat.youngs_modulus * mat.area;
    const double ei = mat.youngs_modulus * mat.second_moment;
    Vec6 f = Vec6::Zero();
    for (const GaussPoint& gp : kGauss) {
        const PointKinematics k = kinematics_at(gp.xi, l, s0);
        const double wp = k.g.dot(q_e);
        const double eps = k.b0.dot(q_e) + 0.5 * wp * wp;
        const double kappa = k.c.dot(q_e);
        f += gp.weight * l * (ea * eps * (k.b0 + wp * k.g) + ei * kappa * k.c);
    }
    return f;
}

Mat6 element_tangent_stiffness(const FeModel& model, int element_id, const Vec6& q_e) {
    const double l = model.element_length(element_id);
    const double s0 = model.element_slope0(element_id);
    const Material& mat = model.material();
    const double ea = mat.youngs_modulus * mat.area;
    const double ei = mat.youngs_modulus * mat.second_moment;
    Mat6 kt = Mat6::Zero();
    for (const GaussPoint& gp : kGauss) {
        const PointKinematics k = kinematics_at(gp.xi, l, s0);
        const double wp = k.g.dot(q_e);
        const double eps = k.b0.dot(q_e) + 0.5 * wp * wp;
        const Vec6 deps = k.b0 + wp * k.g;
        kt += gp.weight * l *
              (ea * (deps * deps.transpose() + eps * (k.g * k.g.transpose())) +
               ei * (k.c * k.c.transpose()));
    }
    return kt;
}

Mat6 element_linear_stiffness(const FeModel& model, int element_id) {
    return element_tangent_stiffness(model, element_id, Vec6::Zero());
}

Mat6 element_mass(const FeModel& model, int element_id) {
    const double l = model.element_length(element_id);
    const Material& mat = model.material();
    const double rho_a = mat.density * mat.area;
    Mat6 m = Mat6::Zero();
    for (const GaussPoint& gp : kGauss) {
        const double xi = gp.xi;
        Vec6 nu = Vec6::Zero();
        nu[0] = 1.0 - xi;
        nu[3] = xi;
        Vec6 nw = Vec6::Zero();
        nw[1] = 1.0 - 3.0 * xi * xi + 2.0 * xi * xi * xi;
        nw[2] = l * (xi - 2.0 * xi * xi + xi * xi * xi);
        nw[4] = 3.0 * xi * xi - 2.0 * xi * xi * xi;
        nw[5] = l * (xi * xi * xi - xi * xi);
        m += gp.weight * l * rho_a * (nu * nu.transpose() + nw * nw.transpose());
    }
    return m;
}

Vec6 element_unit_transverse_load(const FeModel& model, int element_id) {
    const double l = model.element_length(element_id);
    Vec6 f = Vec6::Zero();
    f[1] = l / 2.0;
    f[2] = l * l / 12.0;
    f[4] = l / 2.0;
    f[5] = -l * l / 12.0;
    return f;
}

}  // namespace arcrom::fe
