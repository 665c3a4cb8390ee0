#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcrom/basis.hpp"
#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::manifold {

/// Static quadratic manifold sampler: Gamma(gamma) = sum gamma_i phi_i
/// + 1/2 sum_ij gamma_i gamma_j theta_ij, with per-mode amplitude bounds
/// delta_i = alpha / max |translational phi_i|.
class SqmSampler {
public:
    SqmSampler(const fe::FeModel& model, const Mat& vms,
               const std::vector<modal::SmdEntry>& smds, double alpha);

    int mode_count() const { return static_cast<int>(vms_.cols()); }
    double alpha() const { return alpha_; }
    const Vec& bounds() const { return delta_; }
    const Mat& vms() const { return vms_; }

    /// theta_ij with symmetric pair lookup.
    const Vec& smd(int i, int j) const;

    Vec eval(const Vec& gamma) const;

private:
    Mat vms_;
    std::vector<std::vector<int>> smd_index_;  // pair -> index into thetas_
    std::vector<Vec> thetas_;
    Vec delta_;
    double alpha_ = 0.0;
};

Vec sqm_eval(const SqmSampler& sampler, const Vec& gamma);

/// Latin hypercube over [-delta_i, +delta_i]^k: one sample in each of the
/// n_samples equal bins per coordinate, deterministic for a given seed.
std::vector<Vec> lhs_sample(const SqmSampler& sampler, int n_samples, std::uint64_t seed);

/// ECSW training data: SQM displacement snapshots and per-element nonlinear
/// forces f_e(q_e) - K_e q_e, split into training and validation parts.
struct TrainingSets {
    std::vector<Vec> gammas;
    std::vector<Vec> snapshots;                    // free-dof displacement per sample
    std::vector<std::vector<Vec6>> element_fnl;    // [sample][element]
    int n_train = 0;
    int n_validate = 0;
    std::uint64_t seed = 0;
    int sample_count() const { return static_cast<int>(snapshots.size()); }
};

TrainingSets build_training_sets(const fe::FeModel& model, const SqmSampler& sampler,
                                 int n_train, int n_validate, std::uint64_t seed);

/// Snapshot archive: manifest.txt (seed, sizes, gamma vectors) plus one
/// snapshot_XXXX.txt per sample with "element_id f1 ... f6" lines.
void write_training_archive(const TrainingSets& sets, const std::string& directory);
TrainingSets read_training_archive(const std::string& directory);

}  // namespace arcrom::manifold
