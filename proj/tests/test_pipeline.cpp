#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "arcrom/pipeline.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace arcrom;
using namespace arcrom::pipeline;
namespace fs = std::filesystem;

namespace {

/// Small self-contained config + mesh under a scratch directory.
struct ConfigFixture {
    fs::path dir;

    ConfigFixture() {
        dir = fs::path("test_pipeline_scratch");
        fs::create_directories(dir);
        const fe::FeModel model =
            fe::make_arch_beam(16, 0.4, 5.0 * arcrom::testing::test_material().thickness_equivalent(),
                               arcrom::testing::test_material());
        model.write_mesh_file((dir / "beam.mesh").string());
        std::ofstream cfg(dir / "run.cfg");
        cfg << "[mesh]\n"
            << "file = " << (dir / "beam.mesh").string() << "\n"
            << "[material]\n"
            << "youngs_modulus = 70e9\n"
            << "density = 2700\n"
            << "area = 5e-5\n"
            << "second_moment = 1.6666666666666667e-11\n"
            << "[basis]\n"
            << "mode_count = 6\n"
            << "smpf_top_k = 2\n"
            << "smd_top_k = 3\n"
            << "[manifold]\n"
            << "n_train = 16\n"
            << "n_validate = 4\n"
            << "seed = 5\n"
            << "[ecsw]\n"
            << "tau = 1e-3\n"
            << "[load]\n"
            << "oaspl_db = 140\n"
            << "cutoff_hz = 400\n"
            << "filter_order = 8\n"
            << "dt = 2.5e-4\n"
            << "duration = 0.3\n"
            << "seed = 9\n"
            << "[integration]\n"
            << "zeta = 0.02\n"
            << "run_hfm = false\n"
            << "[output]\n"
            << "directory = " << (dir / "out").string() << "\n"
            << "psd_segment = 512\n";
    }
    ~ConfigFixture() { fs::remove_all(dir); }

    PipelineConfig config() const { return parse_config((dir / "run.cfg").string()); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing, overrides and errors") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    CHECK(config.mode_count == 6);
    CHECK(config.smpf_top_k == 2);
    CHECK(config.smd_top_k == 3);
    CHECK(config.tau == 1e-3);
    CHECK(config.load.oaspl_db == 140.0);
    CHECK(config.load.seed == 9);

    apply_override(config, "ecsw.tau=5e-3");
    CHECK(config.tau == 5e-3);
    apply_override(config, "basis.vms=[1,3]");
    REQUIRE(config.vms.size() == 2);
    CHECK(config.vms[0] == 0);  // 1-based in files
    CHECK(config.vms[1] == 2);

    CHECK_THROWS_AS(apply_override(config, "nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(config, "basis.bogus=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("does_not_exist.cfg"), std::invalid_argument);
}

TEST_CASE("direct and eed modes agree through the pipeline") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_eed").string();
    const auto eed = run_pipeline(config, Mode::eed, Until::tensors);
    config.output_dir = (fix.dir / "out_direct").string();
    const auto direct = run_pipeline(config, Mode::direct, Until::tensors);

    CHECK((eed.tensors_v.k1() - direct.tensors_v.k1()).norm() <=
          1e-8 * direct.tensors_v.k1().norm());
    CHECK((eed.tensors_v.k2() - direct.tensors_v.k2()).norm() <=
          1e-8 * direct.tensors_v.k2().norm());
    CHECK((eed.tensors_v.k3() - direct.tensors_v.k3()).norm() <=
          1e-8 * direct.tensors_v.k3().norm());
    CHECK(eed.report.query_count > 0);
    CHECK(direct.report.query_count == 0);
}

TEST_CASE("linear mode produces zero nonlinear tensors") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_linear").string();
    const auto result = run_pipeline(config, Mode::linear, Until::tensors);
    CHECK(result.tensors_v.k2().norm() == 0.0);
    CHECK(result.tensors_v.k3().norm() == 0.0);
    CHECK(result.tensors_w.k2().norm() == 0.0);
    CHECK(result.basis.m() == 2);  // VMs only
}

TEST_CASE("eed-ecsw pipeline reports the query bookkeeping exactly") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_ecsw").string();
    const auto result = run_pipeline(config, Mode::eed_ecsw, Until::tensors);
    const long m = result.report.basis_size;
    const long expected = 2 * m + m * (m - 1) / 2;
    CHECK(result.report.query_count == expected);
    CHECK(result.report.elements_per_query == result.report.reduced_elements);
    CHECK(result.report.element_evaluations == expected * result.report.reduced_elements);
    CHECK(result.report.reduced_elements < result.report.total_elements);
    CHECK(result.ecsw_model.validation_error == result.report.validation_error);

    // Report files exist and carry the ratio data.
    const fs::path out(config.output_dir);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "manifest.json"));
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["partial"] == false);
    CHECK(manifest["mode"] == "eed-ecsw");
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report["elements_per_query"].get<long>() == result.report.reduced_elements);
    CHECK(report["total_elements"].get<int>() == 16);
}

TEST_CASE("full pipeline emits trajectories and PSDs; artifacts are deterministic") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_full_a").string();
    run_pipeline(config, Mode::eed_ecsw, Until::full);
    const fs::path a(config.output_dir);
    for (const char* name : {"basis_V.mtx", "basis_W.mtx", "basis_U.mtx", "tensors_V.txt",
                             "tensors_W.txt", "ecsw.txt", "traj_rom.csv", "psd_rom_w.csv",
                             "load.csv", "report.json", "manifest.json"}) {
        CHECK(fs::exists(a / name));
    }

    config.output_dir = (fix.dir / "out_full_b").string();
    run_pipeline(config, Mode::eed_ecsw, Until::full);
    const fs::path b(config.output_dir);
    for (const char* name : {"basis_V.mtx", "basis_W.mtx", "basis_U.mtx", "tensors_V.txt",
                             "tensors_W.txt", "ecsw.txt", "traj_rom.csv", "load.csv"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
}

TEST_CASE("tolerance sweep: ordering, trend, and single-tau equivalence") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_sweep").string();
    const auto rows = tolerance_sweep(config, {1e-3, 1e-2, 5e-3});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].tau == 1e-2);  // descending
    CHECK(rows[1].tau == 5e-3);
    CHECK(rows[2].tau == 1e-3);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].reduced_elements >= rows[k - 1].reduced_elements);
    }
    CHECK(fs::exists(fs::path(config.output_dir) / "sweep.csv"));

    // A single-tau sweep reproduces the pipeline's ECSW artifacts bit for bit.
    config.output_dir = (fix.dir / "out_sweep_one").string();
    tolerance_sweep(config, {1e-3});
    config.output_dir = (fix.dir / "out_pipe_one").string();
    run_pipeline(config, Mode::eed_ecsw, Until::tensors);
    CHECK(slurp(fs::path(fix.dir / "out_sweep_one") / "sweep_tau_0" / "ecsw.txt") ==
          slurp(fs::path(fix.dir / "out_pipe_one") / "ecsw.txt"));
    CHECK(slurp(fs::path(fix.dir / "out_sweep_one") / "sweep_tau_0" / "tensors_V.txt") ==
          slurp(fs::path(fix.dir / "out_pipe_one") / "tensors_V.txt"));
}

TEST_CASE("psd comparison helpers") {
    Vec freqs(5), a(5), b(5);
    freqs << 0.0, 10.0, 20.0, 30.0, 40.0;
    a << 1.0, 2.0, 4.0, 1.0, 1.0;
    b = a;
    SUBCASE("identical inputs give zero deviation") {
        const auto cmp = compare_psd(freqs, a, b, 0.0, 40.0);
        CHECK(cmp.mean_abs_db == 0.0);
        CHECK(cmp.bins == 5);
    }
    SUBCASE("a factor of ten is ten dB") {
        const auto cmp = compare_psd(freqs, Vec(10.0 * a), b, 10.0, 30.0);
        CHECK(cmp.mean_abs_db == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(cmp.bins == 3);
    }
    SUBCASE("peak finder respects the band") {
        CHECK(peak_frequency(freqs, a, 0.0, 40.0) == 20.0);
        CHECK(peak_frequency(freqs, a, 25.0, 40.0) == 30.0);
    }
}

TEST_CASE("trajectory and psd csv round trips") {
    const ConfigFixture fix;
    Vec times(3), col(3);
    times << 0.1, 0.2, 0.3;
    col << 1.5, -2.5, 3.25;
    Mat cols(3, 1);
    cols.col(0) = col;
    const std::string traj = (fix.dir / "traj.csv").string();
    write_trajectory_csv(traj, times, {"w"}, cols);
    const auto [t_back, v_back] = read_trajectory_column(traj, "w");
    CHECK((t_back - times).norm() == 0.0);
    CHECK((v_back - col).norm() == 0.0);
    CHECK_THROWS_AS(read_trajectory_column(traj, "nope"), std::runtime_error);

    const std::string psd = (fix.dir / "psd.csv").string();
    write_psd_csv(psd, times, col);
    const auto [f_back, p_back] = read_psd_csv(psd);
    CHECK((f_back - times).norm() == 0.0);
    CHECK((p_back - col).norm() == 0.0);
}

TEST_CASE("stage failure is flagged in the manifest") {
    const ConfigFixture fix;
    PipelineConfig config = fix.config();
    config.output_dir = (fix.dir / "out_fail").string();
    config.load.cutoff_hz = 1e9;  // above Nyquist: integration stage fails
    CHECK_THROWS(run_pipeline(config, Mode::direct, Until::full));
    const auto manifest =
        nlohmann::json::parse(slurp(fs::path(config.output_dir) / "manifest.json"));
    CHECK(manifest["partial"] == true);
    bool failed_stage = false;
    for (const auto& stage : manifest["stages"]) {
        if (stage["status"] == "failed") failed_stage = true;
    }
    CHECK(failed_stage);
}
