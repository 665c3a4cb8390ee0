#include "arcrom/ecsw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "arcrom/vk_beam.hpp"

namespace arcrom::ecsw {

std::pair<Mat, Vec> assemble_G_b(const fe::FeModel& model, const Mat& v,
                                 const manifold::TrainingSets& sets, TrainingSplit which) {
    const int m = static_cast<int>(v.cols());
    const int ne = model.element_count();
    const int begin = which == TrainingSplit::train ? 0 : sets.n_train;
    const int count = which == TrainingSplit::train ? sets.n_train : sets.n_validate;
    if (begin + count > sets.sample_count()) throw std::invalid_argument("ecsw: split out of range");

    Mat g = Mat::Zero(static_cast<long>(count) * m, ne);
    for (int s = 0; s < count; ++s) {
        const auto& fnl = sets.element_fnl[begin + s];
        for (int e = 0; e < ne; ++e) {
            const Mat v_e = model.restrict_rows(v, e);
            g.block(static_cast<long>(s) * m, e, m, 1) = v_e.transpose() * fnl[e];
        }
    }
    Vec b = g * Vec::Ones(ne);
    return {std::move(g), std::move(b)};
}

EcswModel snnls(const Mat& g, const Vec& b, double tau, SnnlsTrace* trace) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("snnls: tau must be in (0,1)");
    const int ne = static_cast<int>(g.cols());
    EcswModel model;
    model.tau = tau;
    model.total_elements = ne;

    const double b_norm = b.norm();
    if (b_norm == 0.0) return model;  // empty mesh is optimal for b = 0
    const double target = tau * b_norm;

    Vec xi = Vec::Zero(ne);
    std::vector<int> active;
    std::vector<char> is_active(ne, 0);
    Vec residual = b;
    double res_norm = b_norm;
    if (trace) trace->residual_norms.push_back(res_norm);

    auto solve_active_ls = [&](const std::vector<int>& cols) -> Vec {
        Mat ga(g.rows(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) ga.col(c) = g.col(cols[c]);
        return ga.householderQr().solve(b);
    };

    // Outer loop adds at most Ne columns; inner loop strictly shrinks the
    // active set, so the iteration terminates.
    long safety = 4L * ne * ne + 16;
    while (res_norm > target) {
        if (static_cast<int>(active.size()) == ne || --safety < 0) {
            std::ostringstream msg;
            msg << "snnls: no convergence, achieved residual " << res_norm / b_norm
                << " with " << active.size() << " of " << ne << " elements (target " << tau << ")";
            throw std::runtime_error(msg.str());
        }
        // Column with the largest positive correlation; ties -> lowest id.
        const Vec mu = g.transpose() * residual;
        int best = -1;
        double best_mu = 0.0;
        for (int e = 0; e < ne; ++e) {
            if (!is_active[e] && mu[e] > best_mu) {
                best_mu = mu[e];
                best = e;
            }
        }
        if (best < 0) {
            std::ostringstream msg;
            msg << "snnls: stalled (no positive correlation), achieved residual "
                << res_norm / b_norm << " (target " << tau << ")";
            throw std::runtime_error(msg.str());
        }
        active.push_back(best);
        is_active[best] = 1;

        while (true) {
            const Vec z = solve_active_ls(active);
            bool feasible = true;
            for (long c = 0; c < z.size(); ++c) {
                if (z[c] <= 0.0) feasible = false;
            }
            if (feasible) {
                for (std::size_t c = 0; c < active.size(); ++c) xi[active[c]] = z[c];
                break;
            }
            // Step toward z until the first active weight hits zero, then
            // deactivate it (and anything else that reached zero).
            double t = 1.0;
            int drop = -1;
            for (std::size_t c = 0; c < active.size(); ++c) {
                if (z[c] <= 0.0) {
                    const double cur = xi[active[c]];
                    const double ratio = cur / (cur - z[c]);
                    if (ratio < t) {
                        t = ratio;
                        drop = active[c];
                    }
                }
            }
            for (std::size_t c = 0; c < active.size(); ++c) {
                xi[active[c]] += t * (z[c] - xi[active[c]]);
            }
            std::vector<int> still;
            for (int e : active) {
                if (e == drop || xi[e] <= 0.0) {
                    xi[e] = 0.0;
                    is_active[e] = 0;
                } else {
                    still.push_back(e);
                }
            }
            active = std::move(still);
            if (active.empty()) break;
        }

        residual = b;
        for (int e : active) residual -= xi[e] * g.col(e);
        res_norm = residual.norm();
        if (trace) trace->residual_norms.push_back(res_norm);
    }

    std::sort(active.begin(), active.end());
    model.element_ids = active;
    model.weights = Vec(active.size());
    for (std::size_t c = 0; c < active.size(); ++c) model.weights[c] = xi[active[c]];
    return model;
}

double validate(EcswModel& model, const Mat& g_v, const Vec& b_v) {
    const double b_norm = b_v.norm();
    if (b_norm == 0.0) {
        model.validation_error = 0.0;
        return 0.0;
    }
    Vec xi = Vec::Zero(g_v.cols());
    for (int c = 0; c < model.size(); ++c) xi[model.element_ids[c]] = model.weights[c];
    model.validation_error = (g_v * xi - b_v).norm() / b_norm;
    return model.validation_error;
}

Mat hyper_reduced_tangent(const fe::FeModel& model, const EcswModel& ecsw, const Mat& v,
                          const Vec& q) {
    const int m = static_cast<int>(v.cols());
    Mat kt = Mat::Zero(m, m);
    for (int c = 0; c < ecsw.size(); ++c) {
        const int e = ecsw.element_ids[c];
        const Mat v_e = model.restrict_rows(v, e);
        const Vec6 q_e = model.gather(q, e);
        const Mat6 dk = fe::element_tangent_stiffness(model, e, q_e) -
                        fe::element_linear_stiffness(model, e);
        kt += ecsw.weights[c] * (v_e.transpose() * dk * v_e);
    }
    return kt;
}

Vec hyper_reduced_force(const fe::FeModel& model, const EcswModel& ecsw, const Mat& v,
                        const Vec& eta) {
    const int m = static_cast<int>(v.cols());
    Vec f = Vec::Zero(m);
    for (int c = 0; c < ecsw.size(); ++c) {
        const int e = ecsw.element_ids[c];
        const Mat v_e = model.restrict_rows(v, e);
        const Vec6 q_e = v_e * eta;
        f += ecsw.weights[c] * (v_e.transpose() * fe::element_internal_force(model, e, q_e));
    }
    return f;
}

void write_ecsw(const EcswModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ecsw: cannot write " + path);
    out.precision(17);
    out << "tau " << model.tau << "\n";
    out << "validation_error " << model.validation_error << "\n";
    out << "reduced_elements " << model.size() << "\n";
    out << "total_elements " << model.total_elements << "\n";
    for (int c = 0; c < model.size(); ++c) {
        out << model.element_ids[c] + 1 << " " << model.weights[c] << "\n";
    }
}

EcswModel read_ecsw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ecsw: cannot open " + path);
    EcswModel model;
    int reduced = 0;
    std::string tag;
    in >> tag >> model.tau;
    in >> tag >> model.validation_error;
    in >> tag >> reduced;
    in >> tag >> model.total_elements;
    model.element_ids.resize(reduced);
    model.weights = Vec(reduced);
    for (int c = 0; c < reduced; ++c) {
        int id = 0;
        if (!(in >> id >> model.weights[c])) throw std::runtime_error("ecsw: truncated " + path);
        model.element_ids[c] = id - 1;
    }
    return model;
}

}  // namespace arcrom::ecsw
