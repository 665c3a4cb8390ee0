#include "arcrom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "arcrom/assembly.hpp"
#include "arcrom/identify.hpp"
#include "arcrom/manifold.hpp"
#include "arcrom/modal.hpp"
#include "arcrom/mtx_io.hpp"
#include "arcrom/newmark.hpp"

namespace arcrom::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_int_list(const std::string& value) {
    std::string body = trim(value);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
        throw std::invalid_argument("config: expected a list like [1, 4, 8]");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<int> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: expected true/false, got '" + value + "'");
}

void set_key(PipelineConfig& c, const std::string& section, const std::string& key,
             const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    try {
        if (full == "mesh.file") c.mesh_file = value;
        else if (full == "material.youngs_modulus") c.material.youngs_modulus = std::stod(value);
        else if (full == "material.density") c.material.density = std::stod(value);
        else if (full == "material.area") c.material.area = std::stod(value);
        else if (full == "material.second_moment") c.material.second_moment = std::stod(value);
        else if (full == "basis.mode_count") c.mode_count = std::stoi(value);
        else if (full == "basis.vms") {
            c.vms.clear();
            for (int v : parse_int_list(value)) c.vms.push_back(v - 1);  // 1-based in file
        } else if (full == "basis.smpf_top_k") c.smpf_top_k = std::stoi(value);
        else if (full == "basis.smd_top_k") c.smd_top_k = std::stoi(value);
        else if (full == "manifold.alpha") c.alpha = std::stod(value);
        else if (full == "manifold.alpha_id") c.alpha_id = std::stod(value);
        else if (full == "manifold.n_train") c.n_train = std::stoi(value);
        else if (full == "manifold.n_validate") c.n_validate = std::stoi(value);
        else if (full == "manifold.seed") c.seed = std::stoull(value);
        else if (full == "ecsw.tau") c.tau = std::stod(value);
        else if (full == "load.oaspl_db") c.load.oaspl_db = std::stod(value);
        else if (full == "load.cutoff_hz") c.load.cutoff_hz = std::stod(value);
        else if (full == "load.filter_order") c.load.filter_order = std::stoi(value);
        else if (full == "load.dt") c.load.dt = std::stod(value);
        else if (full == "load.duration") c.load.duration = std::stod(value);
        else if (full == "load.seed") c.load.seed = std::stoull(value);
        else if (full == "integration.beta") c.newmark_beta = std::stod(value);
        else if (full == "integration.gamma") c.newmark_gamma = std::stod(value);
        else if (full == "integration.rel_tol") c.newton_rel_tol = std::stod(value);
        else if (full == "integration.abs_tol") c.newton_abs_tol = std::stod(value);
        else if (full == "integration.max_iterations") c.newton_max_iterations = std::stoi(value);
        else if (full == "integration.zeta") c.zeta = std::stod(value);
        else if (full == "integration.damping_modes") c.damping_modes = std::stoi(value);
        else if (full == "integration.run_hfm") c.run_hfm = parse_bool(value);
        else if (full == "output.directory") c.output_dir = value;
        else if (full == "output.monitor_node") c.monitor_node = std::stoi(value) - 1;
        else if (full == "output.psd_segment") c.psd_segment = std::stoi(value);
        else if (full == "output.psd_overlap") c.psd_overlap = std::stod(value);
        else if (full == "output.oracle_check") c.oracle_check = parse_bool(value);
        else throw std::invalid_argument("config: unknown key '" + full + "'");
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for '" + full + "': " + value);
    }
}

}  // namespace

PipelineConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    PipelineConfig config;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw std::invalid_argument("config: bad section at line " + std::to_string(lineno));
            }
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        }
        set_key(config, section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return config;
}

void apply_override(PipelineConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw std::invalid_argument("override: expected section.key=value, got " + assignment);
    }
    const std::string full = trim(assignment.substr(0, eq));
    const auto dot = full.find('.');
    if (dot == std::string::npos) {
        throw std::invalid_argument("override: expected section.key=value, got " + assignment);
    }
    set_key(config, full.substr(0, dot), full.substr(dot + 1), trim(assignment.substr(eq + 1)));
}

Mode mode_from_string(const std::string& name) {
    if (name == "eed") return Mode::eed;
    if (name == "eed-ecsw") return Mode::eed_ecsw;
    if (name == "direct") return Mode::direct;
    if (name == "linear") return Mode::linear;
    throw std::invalid_argument("mode must be one of eed, eed-ecsw, direct, linear");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::eed: return "eed";
        case Mode::eed_ecsw: return "eed-ecsw";
        case Mode::direct: return "direct";
        case Mode::linear: return "linear";
    }
    return "?";
}

namespace {

/// Basis-construction stages shared by run_pipeline and the sweep.
struct BasisStages {
    fe::FeModel model;
    Vec p;
    modal::ModeSet modes;
    Vec smpf;
    std::vector<int> selected_vms;
    std::vector<modal::SmdEntry> smds;
    modal::ReductionBasis basis;
    double alpha = 0.0;
    double alpha_id = 0.0;
    double rayleigh_alpha = 0.0;
    double rayleigh_beta = 0.0;
    double vms_seconds = 0.0;
    double smds_seconds = 0.0;
};

BasisStages build_basis_stages(const PipelineConfig& config, Mode mode) {
    BasisStages st{fe::FeModel::from_mesh_file(config.mesh_file, config.material)};
    st.p = fe::uniform_pressure_load(st.model);
    st.alpha = config.alpha > 0.0 ? config.alpha
                                  : 0.6 * config.material.thickness_equivalent();
    st.alpha_id = config.alpha_id > 0.0 ? config.alpha_id : st.alpha;

    const auto t_vms = Clock::now();
    const int k = std::min(config.mode_count, st.model.free_dof_count());
    st.modes = modal::solve_vibration_modes(st.model, k);
    st.smpf = modal::static_mpf(st.modes, fe::assemble_linear_stiffness(st.model), st.p);
    if (!config.vms.empty()) {
        st.selected_vms = config.vms;
        for (int v : st.selected_vms) {
            if (v < 0 || v >= k) throw std::invalid_argument("config: VM index out of range");
        }
    } else {
        std::vector<int> order(k);
        for (int i = 0; i < k; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(st.smpf[a]) > std::abs(st.smpf[b]);
        });
        const int take = std::min(config.smpf_top_k, k);
        st.selected_vms.assign(order.begin(), order.begin() + take);
        std::sort(st.selected_vms.begin(), st.selected_vms.end());
    }
    st.vms_seconds = seconds_since(t_vms);

    const auto t_smds = Clock::now();
    if (mode == Mode::linear) {
        // Linearized ROM: VMs only, mass-normalized, so W = V and U = I.
        const int m = static_cast<int>(st.selected_vms.size());
        st.basis.V = Mat(st.model.free_dof_count(), m);
        for (int c = 0; c < m; ++c) {
            st.basis.V.col(c) = st.modes.shapes.col(st.selected_vms[c]);
            st.basis.labels.push_back(
                {modal::BasisLabel::Kind::vm, st.selected_vms[c], st.selected_vms[c]});
        }
        st.basis.W = st.basis.V;
        st.basis.U = Mat::Identity(m, m);
    } else {
        // sMPF of the selected VMs ranks the SMD pairs.
        Vec selected_smpf(st.selected_vms.size());
        for (std::size_t i = 0; i < st.selected_vms.size(); ++i) {
            selected_smpf[static_cast<long>(i)] = st.smpf[st.selected_vms[i]];
        }
        auto pairs = modal::mdpf_rank(selected_smpf);
        if (config.smd_top_k > 0 && config.smd_top_k < static_cast<int>(pairs.size())) {
            pairs.resize(config.smd_top_k);
        }
        const modal::SmdComputer smd(st.model, st.modes);
        for (const auto& [i, j] : pairs) {
            st.smds.push_back({st.selected_vms[i], st.selected_vms[j],
                               smd.compute(st.selected_vms[i], st.selected_vms[j])});
        }
        st.basis = modal::build_basis(fe::assemble_mass(st.model), st.modes, st.selected_vms,
                                      st.smds);
    }
    st.smds_seconds = seconds_since(t_smds);

    const int n_damp = config.damping_modes > 0
                           ? std::min<int>(config.damping_modes, st.selected_vms.size())
                           : static_cast<int>(st.selected_vms.size());
    Vec damp_freqs(n_damp);
    for (int i = 0; i < n_damp; ++i) {
        damp_freqs[i] = st.modes.angular_frequencies[st.selected_vms[i]];
    }
    std::tie(st.rayleigh_alpha, st.rayleigh_beta) = modal::rayleigh_fit(damp_freqs, config.zeta);
    return st;
}

/// SMDs for the sampler must cover every (i,j) pair of the selected VMs even
/// when the basis keeps only the MDPF top k.
std::vector<modal::SmdEntry> sampler_smds(const BasisStages& st) {
    std::vector<modal::SmdEntry> full;
    const modal::SmdComputer smd(st.model, st.modes);
    const int k = static_cast<int>(st.selected_vms.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const int gi = st.selected_vms[i], gj = st.selected_vms[j];
            bool found = false;
            for (const auto& entry : st.smds) {
                if ((entry.i == gi && entry.j == gj) || (entry.i == gj && entry.j == gi)) {
                    full.push_back({i, j, entry.theta});
                    found = true;
                    break;
                }
            }
            if (!found) full.push_back({i, j, smd.compute(gi, gj)});
        }
    }
    return full;
}

Mat selected_vm_shapes(const BasisStages& st) {
    Mat shapes(st.model.free_dof_count(), st.selected_vms.size());
    for (std::size_t c = 0; c < st.selected_vms.size(); ++c) {
        shapes.col(static_cast<long>(c)) = st.modes.shapes.col(st.selected_vms[c]);
    }
    return shapes;
}

}  // namespace

PsdComparison compare_psd(const Vec& freqs, const Vec& psd_a, const Vec& psd_b, double band_lo,
                          double band_hi) {
    PsdComparison out;
    double sum = 0.0;
    for (long k = 0; k < freqs.size(); ++k) {
        if (freqs[k] < band_lo || freqs[k] > band_hi) continue;
        if (!(psd_a[k] > 0.0) || !(psd_b[k] > 0.0)) continue;
        const double db = std::abs(10.0 * std::log10(psd_a[k] / psd_b[k]));
        sum += db;
        out.max_abs_db = std::max(out.max_abs_db, db);
        ++out.bins;
    }
    if (out.bins > 0) out.mean_abs_db = sum / out.bins;
    return out;
}

double peak_frequency(const Vec& freqs, const Vec& psd, double band_lo, double band_hi) {
    double best = -1.0;
    double best_f = band_lo;
    for (long k = 0; k < freqs.size(); ++k) {
        if (freqs[k] < band_lo || freqs[k] > band_hi) continue;
        if (psd[k] > best) {
            best = psd[k];
            best_f = freqs[k];
        }
    }
    return best_f;
}

void write_trajectory_csv(const std::string& path, const Vec& times,
                          const std::vector<std::string>& names, const Mat& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("trajectory: cannot write " + path);
    out.precision(17);
    out << "t";
    for (const auto& name : names) out << "," << name;
    out << "\n";
    for (long r = 0; r < times.size(); ++r) {
        out << times[r];
        for (long c = 0; c < columns.cols(); ++c) out << "," << columns(r, c);
        out << "\n";
    }
}

std::pair<Vec, Vec> read_trajectory_column(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trajectory: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("trajectory: empty file " + path);
    std::vector<std::string> names;
    std::stringstream hs(header);
    std::string item;
    while (std::getline(hs, item, ',')) names.push_back(trim(item));
    long col = -1;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (names[c] == name) col = static_cast<long>(c);
    }
    if (col < 1) throw std::runtime_error("trajectory: no column '" + name + "' in " + path);
    std::vector<double> times, values;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        long c = 0;
        double t = 0.0, v = 0.0;
        while (std::getline(ls, cell, ',')) {
            if (c == 0) t = std::stod(cell);
            if (c == col) v = std::stod(cell);
            ++c;
        }
        times.push_back(t);
        values.push_back(v);
    }
    Vec tv(times.size()), vv(values.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        tv[static_cast<long>(i)] = times[i];
        vv[static_cast<long>(i)] = values[i];
    }
    return {tv, vv};
}

void write_psd_csv(const std::string& path, const Vec& freqs, const Vec& psd) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("psd: cannot write " + path);
    out.precision(17);
    out << "f,psd\n";
    for (long k = 0; k < freqs.size(); ++k) out << freqs[k] << "," << psd[k] << "\n";
}

std::pair<Vec, Vec> read_psd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("psd: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> fs, ps;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("psd: bad line in " + path);
        fs.push_back(std::stod(line.substr(0, comma)));
        ps.push_back(std::stod(line.substr(comma + 1)));
    }
    Vec fv(fs.size()), pv(ps.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        fv[static_cast<long>(i)] = fs[i];
        pv[static_cast<long>(i)] = ps[i];
    }
    return {fv, pv};
}

namespace {

struct StageLog {
    json stages = json::array();
    void ok(const std::string& name) { stages.push_back({{"name", name}, {"status", "ok"}}); }
    void failed(const std::string& name, const std::string& what) {
        stages.push_back({{"name", name}, {"status", "failed"}, {"error", what}});
    }
};

void write_manifest(const fs::path& dir, const std::string& mode, const StageLog& log,
                    const std::vector<std::string>& artifacts, bool partial) {
    json manifest;
    manifest["mode"] = mode;
    manifest["partial"] = partial;
    manifest["stages"] = log.stages;
    manifest["artifacts"] = artifacts;
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
}

json report_to_json(const BenchmarkReport& r) {
    json j;
    j["mode"] = r.mode;
    j["phases"] = {{"basis_vms", r.basis_vms_seconds},
                   {"basis_smds", r.basis_smds_seconds},
                   {"reduced_mesh", r.reduced_mesh_seconds},
                   {"fe_queries", r.fe_queries_seconds},
                   {"reading", r.reading_seconds},
                   {"identification", r.identification_seconds},
                   {"transformation", r.transformation_seconds},
                   {"other", r.other_seconds},
                   {"integration", r.integration_seconds}};
    j["query_count"] = r.query_count;
    j["elements_per_query"] = r.elements_per_query;
    j["element_evaluations"] = r.element_evaluations;
    j["total_elements"] = r.total_elements;
    j["reduced_elements"] = r.reduced_elements;
    j["basis_size"] = r.basis_size;
    j["tau"] = r.tau;
    j["validation_error"] = r.validation_error;
    if (r.tensor_error_k1 >= 0.0) {
        j["tensor_error_vs_direct"] = {{"k1", r.tensor_error_k1},
                                       {"k2", r.tensor_error_k2},
                                       {"k3", r.tensor_error_k3}};
    }
    return j;
}

void write_report(const fs::path& dir, const BenchmarkReport& r) {
    {
        std::ofstream out(dir / "report.json");
        out << report_to_json(r).dump(2) << "\n";
    }
    std::ofstream out(dir / "report.txt");
    out.precision(6);
    out << "mode            " << r.mode << "\n";
    out << "basis size      " << r.basis_size << "\n";
    out << "--- reduction basis construction [s]\n";
    out << "VMs             " << r.basis_vms_seconds << "\n";
    out << "SMDs            " << r.basis_smds_seconds << "\n";
    out << "--- tensor identification [s]\n";
    out << "reduced mesh    " << r.reduced_mesh_seconds << "\n";
    out << "FE queries      " << r.fe_queries_seconds << "\n";
    out << "reading         " << r.reading_seconds << "\n";
    out << "identification  " << r.identification_seconds << "\n";
    out << "transformation  " << r.transformation_seconds << "\n";
    out << "other           " << r.other_seconds << "\n";
    out << "total id.       " << r.identification_total_seconds() + r.reduced_mesh_seconds << "\n";
    out << "--- counters\n";
    out << "tangent queries      " << r.query_count << "\n";
    out << "elements per query   " << r.elements_per_query << "\n";
    out << "element evaluations  " << r.element_evaluations << "\n";
    out << "reduced / total elements  " << r.reduced_elements << " / " << r.total_elements << "\n";
    if (r.tau > 0.0) {
        out << "tau                  " << r.tau << "\n";
        out << "validation error     " << r.validation_error << "\n";
    }
    if (r.tensor_error_k1 >= 0.0) {
        out << "--- identified vs direct-projection oracle (rel. Frobenius)\n";
        out << "K1 " << r.tensor_error_k1 << "  K2 " << r.tensor_error_k2 << "  K3 "
            << r.tensor_error_k3 << "\n";
    }
    out << "integration [s]  " << r.integration_seconds << "\n";
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, Mode mode, Until until) {
    PipelineResult result;
    result.report.mode = mode_name(mode);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    StageLog log;
    std::vector<std::string> artifacts;
    auto emit = [&](const std::string& name) { artifacts.push_back(name); };

    auto run_stage = [&](const std::string& name, auto&& fn) {
        try {
            fn();
            log.ok(name);
        } catch (...) {
            log.failed(name, "stage failed");
            write_manifest(dir, result.report.mode, log, artifacts, true);
            throw;
        }
    };

    BasisStages st;
    const auto t_begin = Clock::now();
    run_stage("basis", [&] {
        st = build_basis_stages(config, mode);
        result.report.basis_vms_seconds = st.vms_seconds;
        result.report.basis_smds_seconds = st.smds_seconds;
        result.report.basis_size = st.basis.m();
        result.report.total_elements = st.model.element_count();
        result.basis = st.basis;
        result.rayleigh_alpha = st.rayleigh_alpha;
        result.rayleigh_beta = st.rayleigh_beta;

        io::write_dense_matrix_market(st.basis.V, (dir / "basis_V.mtx").string());
        io::write_dense_matrix_market(st.basis.W, (dir / "basis_W.mtx").string());
        io::write_dense_matrix_market(st.basis.U, (dir / "basis_U.mtx").string());
        io::write_dense_matrix_market(st.modes.shapes, (dir / "modes.mtx").string());
        io::write_vector(st.modes.angular_frequencies, (dir / "frequencies.txt").string());
        io::write_vector(st.smpf, (dir / "smpf.txt").string());
        std::ofstream labels(dir / "basis_labels.txt");
        for (const auto& label : st.basis.labels) {
            labels << (label.kind == modal::BasisLabel::Kind::vm ? "vm " : "smd ") << label.i + 1
                   << " " << label.j + 1 << "\n";
        }
        emit("basis_V.mtx");
        emit("basis_W.mtx");
        emit("basis_U.mtx");
        emit("modes.mtx");
        emit("frequencies.txt");
        emit("smpf.txt");
        emit("basis_labels.txt");
    });

    if (mode == Mode::eed_ecsw && until >= Until::reduced_mesh) {
        run_stage("reduced-mesh", [&] {
            const auto t0 = Clock::now();
            const manifold::SqmSampler sampler(st.model, selected_vm_shapes(st), sampler_smds(st),
                                               st.alpha);
            const auto sets = manifold::build_training_sets(st.model, sampler, config.n_train,
                                                            config.n_validate, config.seed);
            auto [g_t, b_t] = ecsw::assemble_G_b(st.model, st.basis.V, sets,
                                                 ecsw::TrainingSplit::train);
            auto [g_v, b_v] = ecsw::assemble_G_b(st.model, st.basis.V, sets,
                                                 ecsw::TrainingSplit::validate);
            result.ecsw_model = ecsw::snnls(g_t, b_t, config.tau);
            ecsw::validate(result.ecsw_model, g_v, b_v);
            result.report.reduced_mesh_seconds = seconds_since(t0);
            result.report.tau = config.tau;
            result.report.validation_error = result.ecsw_model.validation_error;
            result.report.reduced_elements = result.ecsw_model.size();

            manifold::write_training_archive(sets, (dir / "training").string());
            ecsw::write_ecsw(result.ecsw_model, (dir / "ecsw.txt").string());
            emit("training/");
            emit("ecsw.txt");
        });
    }

    if (until >= Until::tensors) {
    run_stage("identification", [&] {
        const auto t0 = Clock::now();
        if (mode == Mode::linear) {
            result.tensors_v = ident::TensorSet(st.basis.m(), ident::BasisTag::V);
            result.tensors_v.k1() =
                st.basis.V.transpose() * (fe::assemble_linear_stiffness(st.model) * st.basis.V);
            result.report.identification_seconds = seconds_since(t0);
        } else if (mode == Mode::direct) {
            const fe::FullTensors full = fe::FullTensors::extract(st.model);
            result.tensors_v = ident::direct_projection(full, st.basis.V);
            result.report.identification_seconds = seconds_since(t0);
        } else {
            std::unique_ptr<ident::TangentProvider> provider;
            if (mode == Mode::eed) {
                provider = std::make_unique<ident::ExactTangentProvider>(st.model, st.basis.V);
            } else {
                provider = std::make_unique<ident::EcswTangentProvider>(st.model,
                                                                        result.ecsw_model,
                                                                        st.basis.V);
            }
            const auto plan = ident::plan_displacements(st.model, st.basis.V, st.alpha_id);
            result.tensors_v = ident::identify_tensors(st.basis.V, plan, *provider);
            const double total = seconds_since(t0);
            result.report.fe_queries_seconds = provider->fe_seconds();
            result.report.reading_seconds = provider->reading_seconds();
            result.report.identification_seconds =
                total - provider->fe_seconds() - provider->reading_seconds();
            result.report.query_count = provider->query_count();
            result.report.elements_per_query = provider->elements_per_query();
            result.report.element_evaluations = provider->element_evaluations();
        }
        if (config.oracle_check && mode != Mode::linear) {
            const fe::FullTensors full = fe::FullTensors::extract(st.model);
            const ident::TensorSet oracle = ident::direct_projection(full, st.basis.V);
            result.report.tensor_error_k1 =
                (result.tensors_v.k1() - oracle.k1()).norm() / oracle.k1().norm();
            result.report.tensor_error_k2 =
                (result.tensors_v.k2() - oracle.k2()).norm() / oracle.k2().norm();
            result.report.tensor_error_k3 =
                (result.tensors_v.k3() - oracle.k3()).norm() / oracle.k3().norm();
        }
        write_tensor_set(result.tensors_v, (dir / "tensors_V.txt").string());
        emit("tensors_V.txt");
    });

    run_stage("transformation", [&] {
        const auto t0 = Clock::now();
        result.tensors_w = ident::transform_tensors(result.tensors_v, st.basis.U);
        result.report.transformation_seconds = seconds_since(t0);
        write_tensor_set(result.tensors_w, (dir / "tensors_W.txt").string());
        emit("tensors_W.txt");
    });

    run_stage("rom-assembly", [&] {
        result.rom_model.tensors = result.tensors_w;
        result.rom_model.mass =
            st.basis.W.transpose() * (fe::assemble_mass(st.model) * st.basis.W);
        result.rom_model.damping = st.rayleigh_alpha * result.rom_model.mass +
                                   st.rayleigh_beta * result.rom_model.tensors.k1();
        result.rom_model.load_shape = st.basis.W.transpose() * st.p;
        io::write_dense_matrix_market(result.rom_model.mass, (dir / "rom_mass.mtx").string());
        io::write_dense_matrix_market(result.rom_model.damping,
                                      (dir / "rom_damping.mtx").string());
        io::write_vector(result.rom_model.load_shape, (dir / "rom_load.txt").string());
        std::ofstream info(dir / "rom_info.txt");
        info.precision(17);
        info << "rayleigh_alpha " << st.rayleigh_alpha << "\n";
        info << "rayleigh_beta " << st.rayleigh_beta << "\n";
        info << "m " << st.basis.m() << "\n";
        emit("rom_mass.mtx");
        emit("rom_damping.mtx");
        emit("rom_load.txt");
        emit("rom_info.txt");
    });
    }

    if (until >= Until::full) {
    run_stage("integration", [&] {
        const auto t0 = Clock::now();
        const Vec amp = loads::gen_pressure(config.load);
        {
            Vec times(amp.size());
            for (long i = 0; i < amp.size(); ++i) times[i] = i * config.load.dt;
            Mat col(amp.size(), 1);
            col.col(0) = amp;
            write_trajectory_csv((dir / "load.csv").string(), times, {"a"}, col);
            emit("load.csv");
        }
        auto amplitude = [&](double t) {
            const long k = std::lround(t / config.load.dt);
            return k >= 0 && k < amp.size() ? amp[k] : 0.0;
        };

        const int monitor = config.monitor_node >= 0 ? config.monitor_node
                                                     : st.model.node_count() / 2;
        if (monitor >= st.model.node_count()) {
            throw std::invalid_argument("config: monitor node out of range");
        }
        std::vector<std::string> names;
        std::vector<int> dofs;
        const char* comp_names[3] = {"u", "w", "theta"};
        for (int c = 0; c < 3; ++c) {
            const int dof = st.model.node_dof(monitor, c);
            if (dof >= 0) {
                names.push_back(comp_names[c]);
                dofs.push_back(dof);
            }
        }

        rom::NewmarkParams params;
        params.beta = config.newmark_beta;
        params.gamma = config.newmark_gamma;
        params.rel_tol = config.newton_rel_tol;
        params.abs_tol = config.newton_abs_tol;
        params.max_iterations = config.newton_max_iterations;

        const int n_steps = static_cast<int>(amp.size()) - 1;
        Mat rom_traj(n_steps, static_cast<long>(dofs.size()));
        Vec times(n_steps);
        Mat w_rows(static_cast<long>(dofs.size()), st.basis.m());
        for (std::size_t d = 0; d < dofs.size(); ++d) {
            w_rows.row(static_cast<long>(d)) = st.basis.W.row(dofs[d]);
        }
        rom::integrate_rom(result.rom_model, amplitude, config.load.dt, n_steps, params,
                           [&](int step, double t, const Vec& u, const Vec&) {
                               times[step - 1] = t;
                               rom_traj.row(step - 1) = (w_rows * u).transpose();
                           });
        write_trajectory_csv((dir / "traj_rom.csv").string(), times, names, rom_traj);
        emit("traj_rom.csv");

        const double sample_rate = 1.0 / config.load.dt;
        for (std::size_t d = 0; d < dofs.size(); ++d) {
            const auto [freqs, psd] = loads::welch_psd(rom_traj.col(static_cast<long>(d)),
                                                       sample_rate, config.psd_segment,
                                                       config.psd_overlap);
            write_psd_csv((dir / ("psd_rom_" + names[d] + ".csv")).string(), freqs, psd);
            emit("psd_rom_" + names[d] + ".csv");
        }

        if (config.run_hfm) {
            Mat hfm_traj(n_steps, static_cast<long>(dofs.size()));
            rom::integrate_hfm(st.model, st.p, amplitude, st.rayleigh_alpha, st.rayleigh_beta,
                               config.load.dt, n_steps, params,
                               [&](int step, double, const Vec& u, const Vec&) {
                                   for (std::size_t d = 0; d < dofs.size(); ++d) {
                                       hfm_traj(step - 1, static_cast<long>(d)) = u[dofs[d]];
                                   }
                               });
            write_trajectory_csv((dir / "traj_hfm.csv").string(), times, names, hfm_traj);
            emit("traj_hfm.csv");
            for (std::size_t d = 0; d < dofs.size(); ++d) {
                const auto [freqs, psd] = loads::welch_psd(hfm_traj.col(static_cast<long>(d)),
                                                           sample_rate, config.psd_segment,
                                                           config.psd_overlap);
                write_psd_csv((dir / ("psd_hfm_" + names[d] + ".csv")).string(), freqs, psd);
                emit("psd_hfm_" + names[d] + ".csv");
            }
        }
        result.report.integration_seconds = seconds_since(t0);
    });
    }

    result.report.other_seconds =
        seconds_since(t_begin) - result.report.basis_vms_seconds -
        result.report.basis_smds_seconds - result.report.reduced_mesh_seconds -
        result.report.fe_queries_seconds - result.report.reading_seconds -
        result.report.identification_seconds - result.report.transformation_seconds -
        result.report.integration_seconds;
    write_report(dir, result.report);
    emit("report.json");
    emit("report.txt");
    write_manifest(dir, result.report.mode, log, artifacts, false);
    result.output_dir = dir.string();
    return result;
}

std::vector<SweepRow> tolerance_sweep(const PipelineConfig& config, std::vector<double> taus) {
    if (taus.empty()) throw std::invalid_argument("sweep: no tau values given");
    std::sort(taus.begin(), taus.end(), std::greater<double>());
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);

    const BasisStages st = build_basis_stages(config, Mode::eed);
    const manifold::SqmSampler sampler(st.model, selected_vm_shapes(st), sampler_smds(st),
                                       st.alpha);
    const auto sets = manifold::build_training_sets(st.model, sampler, config.n_train,
                                                    config.n_validate, config.seed);
    const auto [g_t, b_t] = ecsw::assemble_G_b(st.model, st.basis.V, sets,
                                               ecsw::TrainingSplit::train);
    const auto [g_v, b_v] = ecsw::assemble_G_b(st.model, st.basis.V, sets,
                                               ecsw::TrainingSplit::validate);
    const auto plan = ident::plan_displacements(st.model, st.basis.V, st.alpha_id);

    // EED reference for the speedup column.
    const auto t_eed = Clock::now();
    ident::ExactTangentProvider exact(st.model, st.basis.V);
    const ident::TensorSet tensors_eed = ident::identify_tensors(st.basis.V, plan, exact);
    ident::transform_tensors(tensors_eed, st.basis.U);
    const double eed_seconds = seconds_since(t_eed);

    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const auto t0 = Clock::now();
        ecsw::EcswModel mesh = ecsw::snnls(g_t, b_t, taus[k]);
        ecsw::validate(mesh, g_v, b_v);
        ident::EcswTangentProvider provider(st.model, mesh, st.basis.V);
        const ident::TensorSet tensors = ident::identify_tensors(st.basis.V, plan, provider);
        const ident::TensorSet tensors_w = ident::transform_tensors(tensors, st.basis.U);
        const double total = seconds_since(t0);

        SweepRow row;
        row.tau = taus[k];
        row.reduced_elements = mesh.size();
        row.reduced_fraction = static_cast<double>(mesh.size()) / st.model.element_count();
        row.validation_error = mesh.validation_error;
        row.identification_seconds = total;
        row.speedup = eed_seconds / total;
        rows.push_back(row);

        const fs::path tau_dir = dir / ("sweep_tau_" + std::to_string(k));
        fs::create_directories(tau_dir);
        ecsw::write_ecsw(mesh, (tau_dir / "ecsw.txt").string());
        write_tensor_set(tensors, (tau_dir / "tensors_V.txt").string());
        write_tensor_set(tensors_w, (tau_dir / "tensors_W.txt").string());
    }

    std::ofstream csv(dir / "sweep.csv");
    csv.precision(17);
    csv << "tau,reduced_elements,pct_elements,validation_error,t_id_seconds,speedup\n";
    for (const SweepRow& row : rows) {
        csv << row.tau << "," << row.reduced_elements << "," << 100.0 * row.reduced_fraction << ","
            << row.validation_error << "," << row.identification_seconds << "," << row.speedup
            << "\n";
    }
    return rows;
}

}  // namespace arcrom::pipeline
