#include "arcrom/manifold.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "arcrom/assembly.hpp"
#include "arcrom/rng.hpp"
#include "arcrom/vk_beam.hpp"

namespace arcrom::manifold {

SqmSampler::SqmSampler(const fe::FeModel& model, const Mat& vms,
                       const std::vector<modal::SmdEntry>& smds, double alpha)
    : vms_(vms), alpha_(alpha) {
    const int k = mode_count();
    if (alpha < 0.0) throw std::invalid_argument("sqm: alpha must be non-negative");
    smd_index_.assign(k, std::vector<int>(k, -1));
    thetas_.reserve(smds.size());
    for (const auto& smd : smds) {
        if (smd.i < 0 || smd.i >= k || smd.j < 0 || smd.j >= k) {
            throw std::invalid_argument("sqm: SMD pair out of range");
        }
        smd_index_[smd.i][smd.j] = static_cast<int>(thetas_.size());
        smd_index_[smd.j][smd.i] = static_cast<int>(thetas_.size());
        thetas_.push_back(smd.theta);
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (smd_index_[i][j] < 0) throw std::invalid_argument("sqm: missing SMD pair");
        }
    }
    // Bounds from the translational dofs only (the amplitude scaling is
    // displacement dofs).
    delta_ = Vec(k);
    for (int i = 0; i < k; ++i) {
        double max_transl = 0.0;
        for (int d = 0; d < vms_.rows(); ++d) {
            if (model.is_translational(d)) max_transl = std::max(max_transl, std::abs(vms_(d, i)));
        }
        if (max_transl == 0.0) throw std::invalid_argument("sqm: mode has no translational part");
        delta_[i] = alpha / max_transl;
    }
}

const Vec& SqmSampler::smd(int i, int j) const {
    return thetas_[smd_index_.at(i).at(j)];
}

Vec SqmSampler::eval(const Vec& gamma) const {
    const int k = mode_count();
    if (gamma.size() != k) throw std::invalid_argument("sqm: gamma size mismatch");
    Vec q = vms_ * gamma;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            q += 0.5 * gamma[i] * gamma[j] * smd(i, j);
        }
    }
    return q;
}

Vec sqm_eval(const SqmSampler& sampler, const Vec& gamma) { return sampler.eval(gamma); }

std::vector<Vec> lhs_sample(const SqmSampler& sampler, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("lhs: need at least one sample");
    const int k = sampler.mode_count();
    const Vec& delta = sampler.bounds();
    std::mt19937_64 rng(seed);
    std::vector<Vec> samples(n_samples, Vec(k));
    for (int coord = 0; coord < k; ++coord) {
        const std::vector<int> bins = util::permutation(n_samples, rng);
        const double width = 2.0 * delta[coord] / n_samples;
        for (int s = 0; s < n_samples; ++s) {
            const double u = util::uniform01(rng);
            samples[s][coord] = -delta[coord] + (bins[s] + u) * width;
        }
    }
    return samples;
}

TrainingSets build_training_sets(const fe::FeModel& model, const SqmSampler& sampler,
                                 int n_train, int n_validate, std::uint64_t seed) {
    if (n_train < 1 || n_validate < 0) throw std::invalid_argument("training: bad split sizes");
    TrainingSets sets;
    sets.n_train = n_train;
    sets.n_validate = n_validate;
    sets.seed = seed;
    sets.gammas = lhs_sample(sampler, n_train + n_validate, seed);
    const std::vector<Mat6> k_lin = [&] {
        std::vector<Mat6> mats(model.element_count());
        for (int e = 0; e < model.element_count(); ++e) {
            mats[e] = fe::element_linear_stiffness(model, e);
        }
        return mats;
    }();
    sets.snapshots.reserve(sets.gammas.size());
    sets.element_fnl.reserve(sets.gammas.size());
    for (const Vec& gamma : sets.gammas) {
        const Vec q = sampler.eval(gamma);
        std::vector<Vec6> fnl(model.element_count());
        for (int e = 0; e < model.element_count(); ++e) {
            const Vec6 q_e = model.gather(q, e);
            fnl[e] = fe::element_internal_force(model, e, q_e) - k_lin[e] * q_e;
        }
        sets.snapshots.push_back(q);
        sets.element_fnl.push_back(std::move(fnl));
    }
    return sets;
}

void write_training_archive(const TrainingSets& sets, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    std::ofstream manifest(fs::path(directory) / "manifest.txt");
    if (!manifest) throw std::runtime_error("training archive: cannot write manifest");
    manifest.precision(17);
    manifest << "seed " << sets.seed << "\n";
    manifest << "n_train " << sets.n_train << "\n";
    manifest << "n_validate " << sets.n_validate << "\n";
    manifest << "n_modes " << (sets.gammas.empty() ? 0 : sets.gammas[0].size()) << "\n";
    for (const Vec& gamma : sets.gammas) {
        manifest << "gamma";
        for (long i = 0; i < gamma.size(); ++i) manifest << " " << gamma[i];
        manifest << "\n";
    }
    for (std::size_t s = 0; s < sets.element_fnl.size(); ++s) {
        std::ostringstream name;
        name << "snapshot_" << s << ".txt";
        std::ofstream snap(fs::path(directory) / name.str());
        snap.precision(17);
        for (std::size_t e = 0; e < sets.element_fnl[s].size(); ++e) {
            snap << e + 1;
            for (int a = 0; a < 6; ++a) snap << " " << sets.element_fnl[s][e][a];
            snap << "\n";
        }
    }
}

TrainingSets read_training_archive(const std::string& directory) {
    namespace fs = std::filesystem;
    std::ifstream manifest(fs::path(directory) / "manifest.txt");
    if (!manifest) throw std::runtime_error("training archive: cannot read manifest");
    TrainingSets sets;
    long n_modes = 0;
    std::string line;
    while (std::getline(manifest, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "seed") {
            ls >> sets.seed;
        } else if (tag == "n_train") {
            ls >> sets.n_train;
        } else if (tag == "n_validate") {
            ls >> sets.n_validate;
        } else if (tag == "n_modes") {
            ls >> n_modes;
        } else if (tag == "gamma") {
            Vec gamma(n_modes);
            for (long i = 0; i < n_modes; ++i) ls >> gamma[i];
            sets.gammas.push_back(gamma);
        }
    }
    for (std::size_t s = 0; s < sets.gammas.size(); ++s) {
        std::ostringstream name;
        name << "snapshot_" << s << ".txt";
        std::ifstream snap(fs::path(directory) / name.str());
        if (!snap) throw std::runtime_error("training archive: missing " + name.str());
        std::vector<Vec6> fnl;
        long id = 0;
        while (snap >> id) {
            Vec6 f;
            for (int a = 0; a < 6; ++a) snap >> f[a];
            fnl.push_back(f);
        }
        sets.element_fnl.push_back(std::move(fnl));
    }
    return sets;
}

}  // namespace arcrom::manifold
