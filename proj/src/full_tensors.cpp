#include "arcrom/full_tensors.hpp"

#include <stdexcept>

#include "arcrom/assembly.hpp"
#include "arcrom/vk_beam.hpp"

namespace arcrom::fe {

namespace {

inline int idx2(int j, int k) { return 6 * j + k; }
inline int idx3(int j, int k, int l) { return 36 * j + 6 * k + l; }

}  // namespace

FullTensors FullTensors::extract(const FeModel& model) {
    FullTensors full;
    full.n_ = model.free_dof_count();
    full.k1_ = assemble_linear_stiffness(model);
    const int ne = model.element_count();
    full.dofs_.resize(ne);
    full.k2_.resize(ne);
    full.k3_.resize(ne);

    for (int e = 0; e < ne; ++e) {
        full.dofs_[e] = model.element_free_dofs(e);
        const Mat6 k1_e = element_linear_stiffness(model, e);
        // Forces are exactly cubic, so the even/odd split of f - K1 q gives the
        // quadratic and cubic parts exactly; entries follow by polarization.
        auto nonlinear = [&](const Vec6& q) -> Vec6 {
            return element_internal_force(model, e, q) - k1_e * q;
        };
        auto quad = [&](const Vec6& q) -> Vec6 { return 0.5 * (nonlinear(q) + nonlinear(-q)); };
        auto cub = [&](const Vec6& q) -> Vec6 { return 0.5 * (nonlinear(q) - nonlinear(-q)); };

        std::array<Vec6, 6> quad_jj;
        for (int j = 0; j < 6; ++j) quad_jj[j] = quad(Vec6::Unit(j));

        auto& k2 = full.k2_[e];
        for (int j = 0; j < 6; ++j) {
            for (int k = j; k < 6; ++k) {
                Vec6 col;
                if (j == k) {
                    col = quad_jj[j];
                } else {
                    col = 0.5 * (quad(Vec6::Unit(j) + Vec6::Unit(k)) - quad_jj[j] - quad_jj[k]);
                }
                for (int i = 0; i < 6; ++i) {
                    k2[idx3(i, j, k)] = col[i];
                    k2[idx3(i, k, j)] = col[i];
                }
            }
        }

        // Symmetric trilinear polarization: 6 T(a,b,c) =
        //   C(a+b+c) - C(a+b) - C(a+c) - C(b+c) + C(a) + C(b) + C(c).
        auto& k3 = full.k3_[e];
        for (int j = 0; j < 6; ++j) {
            for (int k = j; k < 6; ++k) {
                for (int l = k; l < 6; ++l) {
                    const Vec6 a = Vec6::Unit(j), b = Vec6::Unit(k), c = Vec6::Unit(l);
                    const Vec6 t = (cub(a + b + c) - cub(a + b) - cub(a + c) - cub(b + c) +
                                    cub(a) + cub(b) + cub(c)) /
                                   6.0;
                    const int perms[6][3] = {{j, k, l}, {j, l, k}, {k, j, l},
                                             {k, l, j}, {l, j, k}, {l, k, j}};
                    for (int i = 0; i < 6; ++i) {
                        for (const auto& p : perms) {
                            k3[static_cast<std::size_t>(i) * 216 + idx3(p[0], p[1], p[2])] = t[i];
                        }
                    }
                }
            }
        }
    }
    return full;
}

Vec FullTensors::force(const Vec& q) const {
    Vec f = k1_ * q;
    f += quadratic_force(q);
    f += cubic_force(q);
    return f;
}

Vec FullTensors::quadratic_force(const Vec& q) const {
    Vec f = Vec::Zero(n_);
    for (std::size_t e = 0; e < dofs_.size(); ++e) {
        Vec6 q_e = Vec6::Zero();
        for (int a = 0; a < 6; ++a) {
            if (dofs_[e][a] >= 0) q_e[a] = q[dofs_[e][a]];
        }
        const auto& k2 = k2_[e];
        for (int i = 0; i < 6; ++i) {
            if (dofs_[e][i] < 0) continue;
            double v = 0.0;
            for (int j = 0; j < 6; ++j) {
                for (int k = 0; k < 6; ++k) v += k2[static_cast<std::size_t>(i) * 36 + idx2(j, k)] * q_e[j] * q_e[k];
            }
            f[dofs_[e][i]] += v;
        }
    }
    return f;
}

Vec FullTensors::cubic_force(const Vec& q) const {
    Vec f = Vec::Zero(n_);
    for (std::size_t e = 0; e < dofs_.size(); ++e) {
        Vec6 q_e = Vec6::Zero();
        for (int a = 0; a < 6; ++a) {
            if (dofs_[e][a] >= 0) q_e[a] = q[dofs_[e][a]];
        }
        const auto& k3 = k3_[e];
        for (int i = 0; i < 6; ++i) {
            if (dofs_[e][i] < 0) continue;
            double v = 0.0;
            for (int j = 0; j < 6; ++j) {
                for (int k = 0; k < 6; ++k) {
                    for (int l = 0; l < 6; ++l) {
                        v += k3[static_cast<std::size_t>(i) * 216 + idx3(j, k, l)] * q_e[j] * q_e[k] * q_e[l];
                    }
                }
            }
            f[dofs_[e][i]] += v;
        }
    }
    return f;
}

double FullTensors::k2_entry(int i, int j, int k) const {
    double v = 0.0;
    for (std::size_t e = 0; e < dofs_.size(); ++e) {
        int li = -1, lj = -1, lk = -1;
        for (int a = 0; a < 6; ++a) {
            if (dofs_[e][a] == i) li = a;
            if (dofs_[e][a] == j) lj = a;
            if (dofs_[e][a] == k) lk = a;
        }
        if (li >= 0 && lj >= 0 && lk >= 0) {
            v += k2_[e][static_cast<std::size_t>(li) * 36 + idx2(lj, lk)];
        }
    }
    return v;
}

double FullTensors::k3_entry(int i, int j, int k, int l) const {
    double v = 0.0;
    for (std::size_t e = 0; e < dofs_.size(); ++e) {
        int li = -1, lj = -1, lk = -1, ll = -1;
        for (int a = 0; a < 6; ++a) {
            if (dofs_[e][a] == i) li = a;
            if (dofs_[e][a] == j) lj = a;
            if (dofs_[e][a] == k) lk = a;
            if (dofs_[e][a] == l) ll = a;
        }
        if (li >= 0 && lj >= 0 && lk >= 0 && ll >= 0) {
            v += k3_[e][static_cast<std::size_t>(li) * 216 + idx3(lj, lk, ll)];
        }
    }
    return v;
}

DenseReducedTensors FullTensors::project(const Mat& v) const {
    if (v.rows() != n_) throw std::invalid_argument("project: basis rows must match free dofs");
    const int m = static_cast<int>(v.cols());
    DenseReducedTensors out;
    out.m = m;
    out.k1 = v.transpose() * (k1_ * v);
    out.k2.assign(static_cast<std::size_t>(m) * m * m, 0.0);
    out.k3.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);

    for (std::size_t e = 0; e < dofs_.size(); ++e) {
        Mat v_e = Mat::Zero(6, m);
        for (int a = 0; a < 6; ++a) {
            if (dofs_[e][a] >= 0) v_e.row(a) = v.row(dofs_[e][a]);
        }
        // K2: contract one mode at a time, k2_e (6,6,6) -> (m,m,m).
        const auto& k2 = k2_[e];
        std::vector<double> t1(static_cast<std::size_t>(6) * 6 * m, 0.0);  // (a,b,k)
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                for (int c = 0; c < 6; ++c) {
                    const double val = k2[static_cast<std::size_t>(a) * 36 + idx2(b, c)];
                    if (val == 0.0) continue;
                    for (int k = 0; k < m; ++k) {
                        t1[(static_cast<std::size_t>(a) * 6 + b) * m + k] += val * v_e(c, k);
                    }
                }
            }
        }
        std::vector<double> t2(static_cast<std::size_t>(6) * m * m, 0.0);  // (a,j,k)
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                for (int j = 0; j < m; ++j) {
                    const double w = v_e(b, j);
                    if (w == 0.0) continue;
                    for (int k = 0; k < m; ++k) {
                        t2[(static_cast<std::size_t>(a) * m + j) * m + k] +=
                            w * t1[(static_cast<std::size_t>(a) * 6 + b) * m + k];
                    }
                }
            }
        }
        for (int a = 0; a < 6; ++a) {
            for (int i = 0; i < m; ++i) {
                const double w = v_e(a, i);
                if (w == 0.0) continue;
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        out.k2[(static_cast<std::size_t>(i) * m + j) * m + k] +=
                            w * t2[(static_cast<std::size_t>(a) * m + j) * m + k];
                    }
                }
            }
        }
        // K3 likewise, (6,6,6,6) -> (m,m,m,m).
        const auto& k3 = k3_[e];
        std::vector<double> s1(static_cast<std::size_t>(216) * m, 0.0);  // (a,b,c,l)
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                for (int c = 0; c < 6; ++c) {
                    for (int d = 0; d < 6; ++d) {
                        const double val = k3[static_cast<std::size_t>(a) * 216 + idx3(b, c, d)];
                        if (val == 0.0) continue;
                        for (int l = 0; l < m; ++l) {
                            s1[static_cast<std::size_t>(idx3(a, b, c)) * m + l] += val * v_e(d, l);
                        }
                    }
                }
            }
        }
        std::vector<double> s2(static_cast<std::size_t>(36) * m * m, 0.0);  // (a,b,k,l)
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                for (int c = 0; c < 6; ++c) {
                    for (int k = 0; k < m; ++k) {
                        const double w = v_e(c, k);
                        if (w == 0.0) continue;
                        for (int l = 0; l < m; ++l) {
                            s2[(static_cast<std::size_t>(idx2(a, b)) * m + k) * m + l] +=
                                w * s1[static_cast<std::size_t>(idx3(a, b, c)) * m + l];
                        }
                    }
                }
            }
        }
        std::vector<double> s3(static_cast<std::size_t>(6) * m * m * m, 0.0);  // (a,j,k,l)
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                for (int j = 0; j < m; ++j) {
                    const double w = v_e(b, j);
                    if (w == 0.0) continue;
                    for (int k = 0; k < m; ++k) {
                        for (int l = 0; l < m; ++l) {
                            s3[((static_cast<std::size_t>(a) * m + j) * m + k) * m + l] +=
                                w * s2[(static_cast<std::size_t>(idx2(a, b)) * m + k) * m + l];
                        }
                    }
                }
            }
        }
        for (int a = 0; a < 6; ++a) {
            for (int i = 0; i < m; ++i) {
                const double w = v_e(a, i);
                if (w == 0.0) continue;
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        for (int l = 0; l < m; ++l) {
                            out.k3[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l] +=
                                w * s3[((static_cast<std::size_t>(a) * m + j) * m + k) * m + l];
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace arcrom::fe
