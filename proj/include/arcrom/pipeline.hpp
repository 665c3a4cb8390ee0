#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcrom/basis.hpp"
#include "arcrom/ecsw.hpp"
#include "arcrom/fe_model.hpp"
#include "arcrom/loads.hpp"
#include "arcrom/rom.hpp"
#include "arcrom/tensor_set.hpp"
#include "arcrom/types.hpp"

namespace arcrom::pipeline {

struct PipelineConfig {
    std::string mesh_file;
    fe::Material material;

    // Basis selection.
    int mode_count = 10;
    std::vector<int> vms;   // explicit 0-based mode indices; empty -> sMPF top-k
    int smpf_top_k = 4;
    int smd_top_k = 0;      // 0 -> all pairs

    // Manifold / training.
    double alpha = 0.0;     // 0 -> 0.6 * thickness equivalent
    double alpha_id = 0.0;  // 0 -> alpha
    int n_train = 45;
    int n_validate = 5;
    std::uint64_t seed = 1;

    // ECSW.
    double tau = 1e-3;

    // Load.
    loads::LoadSpec load;

    // Integration and damping.
    double newmark_beta = 0.25;
    double newmark_gamma = 0.5;
    double newton_rel_tol = 1e-8;
    double newton_abs_tol = 1e-12;
    int newton_max_iterations = 25;
    double zeta = 0.02;
    int damping_modes = 0;  // 0 -> all selected VMs
    bool run_hfm = false;

    // Output.
    std::string output_dir = "out";
    int monitor_node = -1;  // -1 -> mid node
    int psd_segment = 4096;
    double psd_overlap = 0.5;
    bool oracle_check = false;
};

/// Line-based "key = value" configuration with [section] headers.
PipelineConfig parse_config(const std::string& path);
/// Applies a "section.key=value" override string.
void apply_override(PipelineConfig& config, const std::string& assignment);

enum class Mode { eed, eed_ecsw, direct, linear };
Mode mode_from_string(const std::string& name);
std::string mode_name(Mode mode);

/// Phase taxonomy mirroring the construction-time tables: reduced mesh,
/// FE queries, reading, identification, transformation, other.
struct BenchmarkReport {
    std::string mode;
    double basis_vms_seconds = 0.0;
    double basis_smds_seconds = 0.0;
    double reduced_mesh_seconds = 0.0;
    double fe_queries_seconds = 0.0;
    double reading_seconds = 0.0;
    double identification_seconds = 0.0;
    double transformation_seconds = 0.0;
    double other_seconds = 0.0;
    double integration_seconds = 0.0;

    long query_count = 0;
    long elements_per_query = 0;
    long element_evaluations = 0;
    int total_elements = 0;
    int reduced_elements = 0;
    int basis_size = 0;
    double tau = 0.0;
    double validation_error = 0.0;

    // Identified-vs-direct-oracle relative Frobenius errors (oracle_check).
    double tensor_error_k1 = -1.0;
    double tensor_error_k2 = -1.0;
    double tensor_error_k3 = -1.0;

    double identification_total_seconds() const {
        return fe_queries_seconds + reading_seconds + identification_seconds +
               transformation_seconds + other_seconds;
    }
};

struct PipelineResult {
    BenchmarkReport report;
    std::string output_dir;
    modal::ReductionBasis basis;
    ident::TensorSet tensors_v;
    ident::TensorSet tensors_w;
    ecsw::EcswModel ecsw_model;  // empty unless eed-ecsw
    rom::RomModel rom_model;
    double rayleigh_alpha = 0.0;
    double rayleigh_beta = 0.0;
};

/// How far to take the pipeline (CLI verbs stop at intermediate stages).
enum class Until { basis, reduced_mesh, tensors, full };

/// Full pipeline: basis, (optional) reduced mesh, identification,
/// transformation, load synthesis, ROM (and optionally HFM) integration and
/// PSD post-processing, with artifacts and a manifest under output_dir.
PipelineResult run_pipeline(const PipelineConfig& config, Mode mode, Until until = Until::full);

struct SweepRow {
    double tau = 0.0;
    int reduced_elements = 0;
    double reduced_fraction = 0.0;   // |E~| / Ne
    double validation_error = 0.0;
    double identification_seconds = 0.0;  // reduced mesh + identification total
    double speedup = 0.0;                 // EED total / EED-ECSW total
};

/// Reruns reduced mesh + identification per tau (descending), with a single
/// EED reference run for the speedup column; writes sweep.csv.
std::vector<SweepRow> tolerance_sweep(const PipelineConfig& config, std::vector<double> taus);

struct PsdComparison {
    double mean_abs_db = 0.0;
    double max_abs_db = 0.0;
    int bins = 0;
};

/// Mean |10 log10(psd_a / psd_b)| over bins with band_lo <= f <= band_hi.
PsdComparison compare_psd(const Vec& freqs, const Vec& psd_a, const Vec& psd_b, double band_lo,
                          double band_hi);

/// Frequency of the largest PSD bin within [band_lo, band_hi].
double peak_frequency(const Vec& freqs, const Vec& psd, double band_lo, double band_hi);

/// Trajectory CSV helpers (header "t,name1,..."; 17 significant digits).
void write_trajectory_csv(const std::string& path, const Vec& times,
                          const std::vector<std::string>& names, const Mat& columns);
/// Reads one named column (plus times) back.
std::pair<Vec, Vec> read_trajectory_column(const std::string& path, const std::string& name);

void write_psd_csv(const std::string& path, const Vec& freqs, const Vec& psd);
std::pair<Vec, Vec> read_psd_csv(const std::string& path);

}  // namespace arcrom::pipeline
