#include "arcrom/identify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "arcrom/assembly.hpp"
#include "arcrom/vk_beam.hpp"

namespace arcrom::ident {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

IdentificationPlan plan_displacements(const fe::FeModel& model, const Mat& v, double alpha_id) {
    if (!(alpha_id > 0.0)) throw std::invalid_argument("plan: alpha_id must be positive");
    const int m = static_cast<int>(v.cols());
    IdentificationPlan plan;
    plan.m = m;
    plan.alpha_id = alpha_id;
    plan.amplitudes = Vec(m);
    for (int r = 0; r < m; ++r) {
        double max_transl = 0.0;
        for (int d = 0; d < v.rows(); ++d) {
            if (model.is_translational(d)) max_transl = std::max(max_transl, std::abs(v(d, r)));
        }
        if (!(max_transl > 0.0)) {
            throw std::invalid_argument("plan: basis vector has no translational part");
        }
        plan.amplitudes[r] = alpha_id / max_transl;
    }
    plan.cases.reserve(2 * m + m * (m - 1) / 2);
    for (int r = 0; r < m; ++r) {
        plan.cases.push_back({r, -1, plan.amplitudes[r], 0.0});
        plan.cases.push_back({r, -1, -plan.amplitudes[r], 0.0});
    }
    for (int r = 0; r < m; ++r) {
        for (int s = r + 1; s < m; ++s) {
            plan.cases.push_back({r, s, plan.amplitudes[r], plan.amplitudes[s]});
        }
    }
    return plan;
}

ExactTangentProvider::ExactTangentProvider(const fe::FeModel& model, const Mat& v)
    : model_(model), v_(v) {
    k1_ = fe::assemble_linear_stiffness(model);
    k1_reduced_ = v_.transpose() * (k1_ * v_);
}

Mat ExactTangentProvider::query(const Vec& q_full) {
    const auto t0 = Clock::now();
    const SpMat kt = fe::assemble_tangent(model_, q_full);
    fe_seconds_ += seconds_since(t0);
    element_evaluations_ += model_.element_count();

    const auto t1 = Clock::now();
    const Mat reduced = v_.transpose() * ((kt - k1_) * v_);
    reading_seconds_ += seconds_since(t1);
    return reduced;
}

EcswTangentProvider::EcswTangentProvider(const fe::FeModel& model, const ecsw::EcswModel& ecsw,
                                         const Mat& v)
    : restricted_(fe::restrict_to_elements(model, ecsw.element_ids)), weights_(ecsw.weights) {
    const SpMat k1 = fe::assemble_linear_stiffness(model);
    k1_reduced_ = v.transpose() * (k1 * v);
    v_e_.reserve(ecsw.element_ids.size());
    k_lin_.reserve(ecsw.element_ids.size());
    for (int e = 0; e < restricted_.element_count(); ++e) {
        v_e_.push_back(restricted_.restrict_rows(v, e));
        k_lin_.push_back(fe::element_linear_stiffness(restricted_, e));
    }
}

Mat EcswTangentProvider::query(const Vec& q_full) {
    const int ne = restricted_.element_count();
    std::vector<Mat6> tangents(ne);
    const auto t0 = Clock::now();
    for (int e = 0; e < ne; ++e) {
        tangents[e] = fe::element_tangent_stiffness(restricted_, e, restricted_.gather(q_full, e));
    }
    fe_seconds_ += seconds_since(t0);
    element_evaluations_ += ne;

    const auto t1 = Clock::now();
    Mat reduced = Mat::Zero(k1_reduced_.rows(), k1_reduced_.cols());
    for (int e = 0; e < ne; ++e) {
        reduced += weights_[e] * (v_e_[e].transpose() * (tangents[e] - k_lin_[e]) * v_e_[e]);
    }
    reading_seconds_ += seconds_since(t1);
    return reduced;
}

TensorSet identify_tensors(const Mat& v, const IdentificationPlan& plan,
                           TangentProvider& provider) {
    const int m = plan.m;
    if (v.cols() != m) throw std::invalid_argument("identify: basis/plan size mismatch");
    for (int r = 0; r < m; ++r) {
        if (!(plan.amplitudes[r] > 0.0) || !std::isfinite(plan.amplitudes[r])) {
            throw std::invalid_argument("identify: degenerate amplitude in plan");
        }
    }
    const long expected_cases = 2L * m + static_cast<long>(m) * (m - 1) / 2;
    if (plan.case_count() != expected_cases) {
        throw std::invalid_argument("identify: incomplete displacement plan");
    }

    TensorSet set(m, BasisTag::V);
    set.k1() = provider.reduced_linear();

    // Stage 1: single-vector cases. Each off-diagonal quadratic coefficient
    // is observed from both (r=a, j=b) and (r=b, j=a); the estimates are
    // averaged.
    Mat k2_sum = Mat::Zero(m, set.pair_count());
    std::size_t next_case = 0;
    for (int r = 0; r < m; ++r) {
        const PlanCase& plus = plan.cases[next_case++];
        const PlanCase& minus = plan.cases[next_case++];
        if (plus.is_pair() || minus.is_pair() || plus.r != r || minus.r != r ||
            plus.amp_r != -minus.amp_r) {
            throw std::invalid_argument("identify: malformed single-vector plan cases");
        }
        const double lam = plus.amp_r;
        const Mat a = provider.nonlinear_reduced_tangent(lam * v.col(r));
        const Mat b = provider.nonlinear_reduced_tangent(-lam * v.col(r));
        const Mat c2 = (a - b) / (2.0 * lam);
        const Mat c3 = (a + b) / (2.0 * lam * lam);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (r < j) {
                    k2_sum(i, set.pair_index(r, j)) += c2(i, j);
                    set.k3_at(i, r, r, j) = c3(i, j);
                } else if (r == j) {
                    k2_sum(i, set.pair_index(r, r)) += c2(i, j);
                    set.k3_at(i, r, r, r) = c3(i, j) / 3.0;
                } else {
                    k2_sum(i, set.pair_index(j, r)) += c2(i, j);
                    set.k3_at(i, j, r, r) = c3(i, j);
                }
            }
        }
    }
    for (int j = 0; j < m; ++j) {
        for (int k = j; k < m; ++k) {
            // Diagonal pairs carry the factor 2 of the r = j tangent case.
            set.k2().col(set.pair_index(j, k)) = k2_sum.col(set.pair_index(j, k)) / 2.0;
        }
    }

    // Stage 2: pair cases solve the distinct-index cubic coefficients.
    for (; next_case < plan.cases.size(); ++next_case) {
        const PlanCase& pc = plan.cases[next_case];
        if (!pc.is_pair()) throw std::invalid_argument("identify: expected pair case");
        const int r = pc.r, s = pc.s;
        const double lr = pc.amp_r, ls = pc.amp_s;
        const Mat c = provider.nonlinear_reduced_tangent(lr * v.col(r) + ls * v.col(s));
        for (int j = s + 1; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                const double known = set.k2_at(i, r, j) * lr + set.k2_at(i, s, j) * ls +
                                     set.k3_at(i, r, r, j) * lr * lr +
                                     set.k3_at(i, s, s, j) * ls * ls;
                set.k3_at(i, r, s, j) = (c(i, j) - known) / (lr * ls);
            }
        }
    }
    return set;
}

TensorSet direct_projection(const fe::FullTensors& full, const Mat& v) {
    const fe::DenseReducedTensors dense = full.project(v);
    const int m = dense.m;
    TensorSet set(m, BasisTag::V);
    set.k1() = dense.k1;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                double folded = dense.k2_at(i, j, k);
                if (j != k) folded += dense.k2_at(i, k, j);
                set.k2_at(i, j, k) = folded;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                for (int l = k; l < m; ++l) {
                    double folded = 0.0;
                    const int perms[6][3] = {{j, k, l}, {j, l, k}, {k, j, l},
                                             {k, l, j}, {l, j, k}, {l, k, j}};
                    for (int p = 0; p < 6; ++p) {
                        // Skip duplicate permutations of repeated indices.
                        bool seen = false;
                        for (int q = 0; q < p; ++q) {
                            if (perms[q][0] == perms[p][0] && perms[q][1] == perms[p][1] &&
                                perms[q][2] == perms[p][2]) {
                                seen = true;
                                break;
                            }
                        }
                        if (!seen) folded += dense.k3_at(i, perms[p][0], perms[p][1], perms[p][2]);
                    }
                    set.k3_at(i, j, k, l) = folded;
                }
            }
        }
    }
    return set;
}

Mat compute_U(const Mat& v, const Mat& w) {
    if (v.rows() != w.rows()) throw std::invalid_argument("compute_U: shape mismatch");
    return v.colPivHouseholderQr().solve(w);
}

namespace {

/// Mode-wise contraction of a flat dense tensor (rank 3 or 4, extent m) with
/// u on every index: out_{i'j'...} = sum in_{ij...} u(i,i') u(j,j') ...
std::vector<double> contract_all_modes(const std::vector<double>& tensor, int rank, int m,
                                       const Mat& u) {
    std::vector<double> cur = tensor;
    std::size_t total = cur.size();
    for (int mode = 0; mode < rank; ++mode) {
        // Contract the first index, then rotate axes so each index passes
        // through the front exactly once.
        const std::size_t rest = total / m;
        std::vector<double> next(total, 0.0);
        // next[(i', rest)] = sum_i u(i, i') cur[(i, rest)], then move axis to back.
        for (int i = 0; i < m; ++i) {
            for (int ip = 0; ip < m; ++ip) {
                const double w = u(i, ip);
                if (w == 0.0) continue;
                const double* src = cur.data() + static_cast<std::size_t>(i) * rest;
                double* dst = next.data() + static_cast<std::size_t>(ip) * rest;
                for (std::size_t r = 0; r < rest; ++r) dst[r] += w * src[r];
            }
        }
        // Rotate: (i', rest) -> (rest, i') so the next mode is in front.
        std::vector<double> rotated(total);
        for (int ip = 0; ip < m; ++ip) {
            for (std::size_t r = 0; r < rest; ++r) {
                rotated[r * m + ip] = next[static_cast<std::size_t>(ip) * rest + r];
            }
        }
        cur = std::move(rotated);
    }
    return cur;
}

}  // namespace

TensorSet transform_tensors(const TensorSet& tensors, const Mat& u) {
    const int m = tensors.m();
    if (u.rows() != m || u.cols() != m) throw std::invalid_argument("transform: U must be m x m");
    TensorSet out(m, BasisTag::W);
    out.k1() = u.transpose() * tensors.k1() * u;

    // Densify the unique-monomial storage (upper entries only), transform,
    // re-fold by collecting permutation-equivalent monomials.
    std::vector<double> d2(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                d2[(static_cast<std::size_t>(i) * m + j) * m + k] = tensors.k2_at(i, j, k);
            }
        }
    }
    const std::vector<double> t2 = contract_all_modes(d2, 3, m, u);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                double folded = t2[(static_cast<std::size_t>(i) * m + j) * m + k];
                if (j != k) folded += t2[(static_cast<std::size_t>(i) * m + k) * m + j];
                out.k2_at(i, j, k) = folded;
            }
        }
    }

    std::vector<double> d3(static_cast<std::size_t>(m) * m * m * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                for (int l = k; l < m; ++l) {
                    d3[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l] =
                        tensors.k3_at(i, j, k, l);
                }
            }
        }
    }
    const std::vector<double> t3 = contract_all_modes(d3, 4, m, u);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                for (int l = k; l < m; ++l) {
                    double folded = 0.0;
                    const int perms[6][3] = {{j, k, l}, {j, l, k}, {k, j, l},
                                             {k, l, j}, {l, j, k}, {l, k, j}};
                    for (int p = 0; p < 6; ++p) {
                        bool seen = false;
                        for (int q = 0; q < p; ++q) {
                            if (perms[q][0] == perms[p][0] && perms[q][1] == perms[p][1] &&
                                perms[q][2] == perms[p][2]) {
                                seen = true;
                                break;
                            }
                        }
                        if (!seen) {
                            folded += t3[((static_cast<std::size_t>(i) * m + perms[p][0]) * m +
                                          perms[p][1]) *
                                             m +
                                         perms[p][2]];
                        }
                    }
                    out.k3_at(i, j, k, l) = folded;
                }
            }
        }
    }
    return out;
}

Mat reduced_tangent_exact(const fe::FeModel& model, const Mat& v, const Vec& q) {
    const SpMat kt = fe::assemble_tangent(model, q);
    return v.transpose() * (kt * v);
}

}  // namespace arcrom::ident
