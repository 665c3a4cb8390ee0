#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arcrom/fe_model.hpp"
#include "arcrom/manifold.hpp"
#include "arcrom/types.hpp"

namespace arcrom::ecsw {

/// Reduced mesh: element subset with strictly positive weights.
struct EcswModel {
    std::vector<int> element_ids;  // ascending
    Vec weights;                   // aligned with element_ids, > 0
    double tau = 0.0;
    double validation_error = 0.0;
    int total_elements = 0;
    int size() const { return static_cast<int>(element_ids.size()); }
};

/// Per-iteration residual norms of the greedy solve.
struct SnnlsTrace {
    std::vector<double> residual_norms;
};

enum class TrainingSplit { train, validate };

/// G stacks V_e' f_nl,e per snapshot (rows) and element (columns);
/// b = G * ones.
std::pair<Mat, Vec> assemble_G_b(const fe::FeModel& model, const Mat& v,
                                 const manifold::TrainingSets& sets, TrainingSplit which);

/// Greedy sparse NNLS for  min ||xi||_0  s.t. ||G xi - b|| <= tau ||b||,
/// xi >= 0. Lawson-Hanson active set growth, correlation ties broken by
/// lowest column id, removed columns may re-enter. b = 0 returns an empty
/// mesh. Throws std::runtime_error with the achieved residual if the
/// tolerance cannot be reached.
EcswModel snnls(const Mat& g, const Vec& b, double tau, SnnlsTrace* trace = nullptr);

/// Relative validation error ||G_v xi - b_v|| / ||b_v||; stored in the model.
double validate(EcswModel& model, const Mat& g_v, const Vec& b_v);

/// Hyperreduced nonlinear reduced tangent at full-space q:
/// sum_e xi_e V_e' (K_e^t(q_e) - K_e) V_e.
Mat hyper_reduced_tangent(const fe::FeModel& model, const EcswModel& ecsw, const Mat& v,
                          const Vec& q);

/// Hyperreduced reduced force sum_e xi_e V_e' f_e(V_e eta).
Vec hyper_reduced_force(const fe::FeModel& model, const EcswModel& ecsw, const Mat& v,
                        const Vec& eta);

/// Text serialization: header lines (tau, validation_error, counts) then
/// one "element_id weight" line per retained element (ids 1-based).
void write_ecsw(const EcswModel& model, const std::string& path);
EcswModel read_ecsw(const std::string& path);

}  // namespace arcrom::ecsw
