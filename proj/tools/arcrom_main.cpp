#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "arcrom/pipeline.hpp"

namespace {

using arcrom::pipeline::Mode;
using arcrom::pipeline::PipelineConfig;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitStageFailure = 2;

struct CommonOptions {
    std::string config_path;
    std::string output_dir;
    std::string mode = "eed";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_mode) {
    cmd->add_option("-c,--config", opts.config_path, "pipeline configuration file")->required();
    cmd->add_option("-o,--out", opts.output_dir, "output directory (overrides the config)");
    if (with_mode) {
        cmd->add_option("-m,--mode", opts.mode, "eed | eed-ecsw | direct | linear");
    }
    cmd->add_option("-s,--set", opts.overrides, "config override section.key=value")
        ->take_all();
}

PipelineConfig load_config(const CommonOptions& opts) {
    PipelineConfig config = arcrom::pipeline::parse_config(opts.config_path);
    for (const std::string& assignment : opts.overrides) {
        arcrom::pipeline::apply_override(config, assignment);
    }
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
    if (!std::filesystem::exists(config.mesh_file)) {
        throw std::invalid_argument("mesh file not found: " + config.mesh_file);
    }
    return config;
}

int run_guarded(const CommonOptions& opts, const std::function<int(const PipelineConfig&)>& body) {
    PipelineConfig config;
    try {
        config = load_config(opts);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    try {
        return body(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return kExitStageFailure;
    }
}

int cmd_pipeline(const CommonOptions& opts,
                 arcrom::pipeline::Until until = arcrom::pipeline::Until::full) {
    return run_guarded(opts, [&](const PipelineConfig& config) {
        const Mode mode = arcrom::pipeline::mode_from_string(opts.mode);
        const auto result = arcrom::pipeline::run_pipeline(config, mode, until);
        std::cout << "pipeline (" << arcrom::pipeline::mode_name(mode) << ") done, artifacts in "
                  << result.output_dir << "\n";
        std::cout << "  basis size " << result.report.basis_size << ", tangent queries "
                  << result.report.query_count << "\n";
        if (mode == Mode::eed_ecsw) {
            std::cout << "  reduced mesh " << result.report.reduced_elements << " / "
                      << result.report.total_elements
                      << " elements, validation error " << result.report.validation_error << "\n";
        }
        return kExitOk;
    });
}

int cmd_sweep(const CommonOptions& opts, const std::string& taus_arg) {
    return run_guarded(opts, [&](const PipelineConfig& config) {
        std::vector<double> taus;
        std::stringstream ss(taus_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) taus.push_back(std::stod(item));
        }
        const auto rows = arcrom::pipeline::tolerance_sweep(config, taus);
        std::cout << "tau        elements  %elements  eps_ecsw     t_id[s]   speedup\n";
        for (const auto& row : rows) {
            std::printf("%-10.2e %-9d %-10.3f %-12.3e %-9.3f %-8.2f\n", row.tau,
                        row.reduced_elements, 100.0 * row.reduced_fraction, row.validation_error,
                        row.identification_seconds, row.speedup);
        }
        std::cout << "sweep.csv written to " << config.output_dir << "\n";
        return kExitOk;
    });
}

int cmd_psd(const std::string& input, const std::string& column, int segment, double overlap,
            const std::string& output, const std::string& reference, double band_lo,
            double band_hi) {
    try {
        const auto [times, values] = arcrom::pipeline::read_trajectory_column(input, column);
        if (times.size() < 2) throw std::invalid_argument("psd: trajectory too short");
        const double fs = 1.0 / (times[1] - times[0]);
        const auto [freqs, psd] = arcrom::loads::welch_psd(values, fs, segment, overlap);
        arcrom::pipeline::write_psd_csv(output, freqs, psd);
        std::cout << "psd written to " << output << " (df = " << freqs[1] - freqs[0] << " Hz)\n";
        if (!reference.empty()) {
            const auto [ref_freqs, ref_psd] = arcrom::pipeline::read_psd_csv(reference);
            if (ref_freqs.size() != freqs.size()) {
                throw std::invalid_argument("psd: reference grid does not match");
            }
            const auto cmp = arcrom::pipeline::compare_psd(freqs, psd, ref_psd, band_lo, band_hi);
            std::cout << "mean |dPSD| over [" << band_lo << ", " << band_hi << "] Hz: "
                      << cmp.mean_abs_db << " dB over " << cmp.bins << " bins (max "
                      << cmp.max_abs_db << " dB)\n";
        }
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return kExitStageFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arcrom - nonlinear ROM construction with ECSW-accelerated identification"};
    app.require_subcommand(1);

    CommonOptions basis_opts, train_opts, identify_opts, integrate_opts, pipeline_opts,
        sweep_opts;
    std::string taus_arg = "1e-2,5e-3,1e-3,5e-4,1e-4";

    // Staged verbs share the pipeline driver; earlier verbs stop after their
    // stage by trimming the work that follows (integration is the only
    // stage with meaningful cost beyond identification).
    CLI::App* build_basis = app.add_subcommand("build-basis", "modes, sMPF selection, SMDs, RB");
    add_common(build_basis, basis_opts, false);

    CLI::App* train = app.add_subcommand("train-ecsw", "SQM training sets and sNNLS reduced mesh");
    add_common(train, train_opts, false);

    CLI::App* identify = app.add_subcommand("identify", "tensor identification + transformation");
    add_common(identify, identify_opts, true);

    CLI::App* integrate = app.add_subcommand("integrate", "time integration of the built ROM");
    add_common(integrate, integrate_opts, true);

    CLI::App* pipeline = app.add_subcommand("pipeline", "full pipeline");
    add_common(pipeline, pipeline_opts, true);

    CLI::App* sweep = app.add_subcommand("sweep", "tolerance sweep (Table-3 style)");
    add_common(sweep, sweep_opts, false);
    sweep->add_option("--taus", taus_arg, "comma-separated tau list");

    std::string psd_input, psd_column = "w", psd_output = "psd.csv", psd_reference;
    int psd_segment = 4096;
    double psd_overlap = 0.5, band_lo = 0.0, band_hi = 1e12;
    CLI::App* psd = app.add_subcommand("psd", "Welch PSD of a trajectory column");
    psd->add_option("-i,--input", psd_input, "trajectory CSV")->required();
    psd->add_option("--column", psd_column, "column name (default w)");
    psd->add_option("--segment", psd_segment, "segment length");
    psd->add_option("--overlap", psd_overlap, "overlap fraction");
    psd->add_option("-o,--out", psd_output, "output CSV");
    psd->add_option("--reference", psd_reference, "reference PSD CSV to compare against");
    psd->add_option("--band-lo", band_lo, "comparison band lower edge [Hz]");
    psd->add_option("--band-hi", band_hi, "comparison band upper edge [Hz]");

    CLI11_PARSE(app, argc, argv);

    if (build_basis->parsed()) {
        basis_opts.mode = "eed";
        return cmd_pipeline(basis_opts, arcrom::pipeline::Until::basis);
    }
    if (train->parsed()) {
        train_opts.mode = "eed-ecsw";
        return cmd_pipeline(train_opts, arcrom::pipeline::Until::reduced_mesh);
    }
    if (identify->parsed()) {
        return cmd_pipeline(identify_opts, arcrom::pipeline::Until::tensors);
    }
    if (integrate->parsed()) return cmd_pipeline(integrate_opts);
    if (pipeline->parsed()) return cmd_pipeline(pipeline_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, taus_arg);
    if (psd->parsed()) {
        return cmd_psd(psd_input, psd_column, psd_segment, psd_overlap, psd_output, psd_reference,
                       band_lo, band_hi);
    }
    return kExitInputError;
}
