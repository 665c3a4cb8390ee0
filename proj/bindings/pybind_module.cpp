#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arcrom/assembly.hpp"
#include "arcrom/basis.hpp"
#include "arcrom/ecsw.hpp"
#include "arcrom/identify.hpp"
#include "arcrom/loads.hpp"
#include "arcrom/manifold.hpp"
#include "arcrom/modal.hpp"
#include "arcrom/newmark.hpp"
#include "arcrom/pipeline.hpp"
#include "arcrom/rom.hpp"
#include "arcrom/tensor_set.hpp"
#include "arcrom/vk_beam.hpp"

namespace py = pybind11;
using namespace arcrom;

namespace {

std::vector<modal::SmdEntry> to_smd_entries(
    const std::vector<std::tuple<int, int, Vec>>& smds) {
    std::vector<modal::SmdEntry> entries;
    entries.reserve(smds.size());
    for (const auto& [i, j, theta] : smds) entries.push_back({i, j, theta});
    return entries;
}

py::dict report_to_dict(const pipeline::BenchmarkReport& r) {
    py::dict d;
    d["mode"] = r.mode;
    d["basis_vms_seconds"] = r.basis_vms_seconds;
    d["basis_smds_seconds"] = r.basis_smds_seconds;
    d["reduced_mesh_seconds"] = r.reduced_mesh_seconds;
    d["fe_queries_seconds"] = r.fe_queries_seconds;
    d["reading_seconds"] = r.reading_seconds;
    d["identification_seconds"] = r.identification_seconds;
    d["transformation_seconds"] = r.transformation_seconds;
    d["other_seconds"] = r.other_seconds;
    d["integration_seconds"] = r.integration_seconds;
    d["query_count"] = r.query_count;
    d["elements_per_query"] = r.elements_per_query;
    d["element_evaluations"] = r.element_evaluations;
    d["total_elements"] = r.total_elements;
    d["reduced_elements"] = r.reduced_elements;
    d["basis_size"] = r.basis_size;
    d["tau"] = r.tau;
    d["validation_error"] = r.validation_error;
    d["tensor_error_k1"] = r.tensor_error_k1;
    d["tensor_error_k2"] = r.tensor_error_k2;
    d["tensor_error_k3"] = r.tensor_error_k3;
    return d;
}

}  // namespace

PYBIND11_MODULE(_arcrom, m) {
    m.doc() = "Nonlinear ROM construction with ECSW-accelerated tensor identification";

    py::class_<fe::Material>(m, "Material")
        .def(py::init([](double e, double rho, double a, double i) {
                 fe::Material mat{e, rho, a, i};
                 mat.validate();
                 return mat;
             }),
             py::arg("youngs_modulus"), py::arg("density"), py::arg("area"),
             py::arg("second_moment"))
        .def_readonly("youngs_modulus", &fe::Material::youngs_modulus)
        .def_readonly("density", &fe::Material::density)
        .def_readonly("area", &fe::Material::area)
        .def_readonly("second_moment", &fe::Material::second_moment)
        .def("thickness_equivalent", &fe::Material::thickness_equivalent);

    py::class_<fe::FeModel>(m, "FeModel")
        .def_static("from_mesh_file", &fe::FeModel::from_mesh_file, py::arg("path"),
                    py::arg("material"))
        .def("write_mesh_file", &fe::FeModel::write_mesh_file)
        .def_property_readonly("n_free", &fe::FeModel::free_dof_count)
        .def_property_readonly("n_elements", &fe::FeModel::element_count)
        .def_property_readonly("n_nodes", &fe::FeModel::node_count)
        .def("node_dof", &fe::FeModel::node_dof, py::arg("node"), py::arg("component"))
        .def("internal_force",
             [](const fe::FeModel& model, const Vec& q) {
                 return fe::assemble_internal_force(model, q);
             })
        .def("tangent_stiffness",
             [](const fe::FeModel& model, const Vec& q) {
                 return fe::assemble_tangent(model, q);
             })
        .def("linear_stiffness",
             [](const fe::FeModel& model) { return fe::assemble_linear_stiffness(model); })
        .def("mass", [](const fe::FeModel& model) { return fe::assemble_mass(model); })
        .def("strain_energy",
             [](const fe::FeModel& model, const Vec& q) { return fe::strain_energy(model, q); })
        .def("uniform_pressure_load",
             [](const fe::FeModel& model) { return fe::uniform_pressure_load(model); });

    m.def("make_arch_beam", &fe::make_arch_beam, py::arg("n_elements"), py::arg("length"),
          py::arg("rise"), py::arg("material"), py::arg("clamp_left") = true,
          py::arg("clamp_right") = true);

    py::class_<modal::ModeSet>(m, "ModeSet")
        .def_readonly("shapes", &modal::ModeSet::shapes)
        .def_readonly("angular_frequencies", &modal::ModeSet::angular_frequencies)
        .def_property_readonly("count", &modal::ModeSet::count);

    m.def("solve_vibration_modes", &modal::solve_vibration_modes, py::arg("model"),
          py::arg("count"));
    m.def(
        "static_mpf",
        [](const modal::ModeSet& modes, const fe::FeModel& model, const Vec& p) {
            return modal::static_mpf(modes, fe::assemble_linear_stiffness(model), p);
        },
        py::arg("modes"), py::arg("model"), py::arg("load"));
    m.def("compute_smd", &modal::compute_smd, py::arg("model"), py::arg("modes"), py::arg("i"),
          py::arg("j"), py::arg("step") = 0.0);
    m.def("mdpf_rank", py::overload_cast<const Vec&>(&modal::mdpf_rank), py::arg("smpf"));
    m.def("rayleigh_fit", &modal::rayleigh_fit, py::arg("angular_frequencies"), py::arg("zeta"));

    py::class_<modal::ReductionBasis>(m, "ReductionBasis")
        .def_readonly("V", &modal::ReductionBasis::V)
        .def_readonly("W", &modal::ReductionBasis::W)
        .def_readonly("U", &modal::ReductionBasis::U)
        .def_property_readonly("m", &modal::ReductionBasis::m)
        .def_property_readonly("labels", [](const modal::ReductionBasis& basis) {
            std::vector<std::tuple<std::string, int, int>> out;
            for (const auto& label : basis.labels) {
                out.emplace_back(label.kind == modal::BasisLabel::Kind::vm ? "vm" : "smd",
                                 label.i, label.j);
            }
            return out;
        });

    m.def(
        "build_basis",
        [](const fe::FeModel& model, const modal::ModeSet& modes,
           const std::vector<int>& selected, const std::vector<std::tuple<int, int, Vec>>& smds) {
            return modal::build_basis(fe::assemble_mass(model), modes, selected,
                                      to_smd_entries(smds));
        },
        py::arg("model"), py::arg("modes"), py::arg("selected_vms"), py::arg("smds"));

    py::class_<manifold::SqmSampler>(m, "SqmSampler")
        .def(py::init([](const fe::FeModel& model, const Mat& vms,
                         const std::vector<std::tuple<int, int, Vec>>& smds, double alpha) {
                 return manifold::SqmSampler(model, vms, to_smd_entries(smds), alpha);
             }),
             py::arg("model"), py::arg("vms"), py::arg("smds"), py::arg("alpha"))
        .def_property_readonly("bounds", &manifold::SqmSampler::bounds)
        .def("eval", &manifold::SqmSampler::eval, py::arg("gamma"));

    m.def("lhs_sample", &manifold::lhs_sample, py::arg("sampler"), py::arg("n_samples"),
          py::arg("seed"));

    py::class_<manifold::TrainingSets>(m, "TrainingSets")
        .def_readonly("n_train", &manifold::TrainingSets::n_train)
        .def_readonly("n_validate", &manifold::TrainingSets::n_validate)
        .def_readonly("snapshots", &manifold::TrainingSets::snapshots)
        .def_property_readonly("count", &manifold::TrainingSets::sample_count);

    m.def("build_training_sets", &manifold::build_training_sets, py::arg("model"),
          py::arg("sampler"), py::arg("n_train"), py::arg("n_validate"), py::arg("seed"));

    py::class_<ecsw::EcswModel>(m, "EcswModel")
        .def_readonly("element_ids", &ecsw::EcswModel::element_ids)
        .def_readonly("weights", &ecsw::EcswModel::weights)
        .def_readonly("tau", &ecsw::EcswModel::tau)
        .def_readonly("validation_error", &ecsw::EcswModel::validation_error)
        .def_readonly("total_elements", &ecsw::EcswModel::total_elements)
        .def_property_readonly("size", &ecsw::EcswModel::size);

    m.def(
        "assemble_G_b",
        [](const fe::FeModel& model, const Mat& v, const manifold::TrainingSets& sets,
           const std::string& which) {
            return ecsw::assemble_G_b(model, v, sets,
                                      which == "train" ? ecsw::TrainingSplit::train
                                                       : ecsw::TrainingSplit::validate);
        },
        py::arg("model"), py::arg("basis"), py::arg("training"), py::arg("which") = "train");
    m.def(
        "snnls",
        [](const Mat& g, const Vec& b, double tau) { return ecsw::snnls(g, b, tau); },
        py::arg("G"), py::arg("b"), py::arg("tau"));
    m.def("validate_ecsw", &ecsw::validate, py::arg("ecsw"), py::arg("G_v"), py::arg("b_v"));
    m.def("hyper_reduced_force", &ecsw::hyper_reduced_force, py::arg("model"), py::arg("ecsw"),
          py::arg("basis"), py::arg("eta"));
    m.def("hyper_reduced_tangent", &ecsw::hyper_reduced_tangent, py::arg("model"),
          py::arg("ecsw"), py::arg("basis"), py::arg("q"));

    py::class_<ident::TensorSet>(m, "TensorSet")
        .def_property_readonly("m", &ident::TensorSet::m)
        .def_property_readonly("k1", [](const ident::TensorSet& t) { return t.k1(); })
        .def_property_readonly("k2", [](const ident::TensorSet& t) { return t.k2(); })
        .def_property_readonly("k3", [](const ident::TensorSet& t) { return t.k3(); })
        .def("force", &ident::TensorSet::force, py::arg("eta"))
        .def("jacobian", &ident::TensorSet::jacobian, py::arg("eta"))
        .def("save", [](const ident::TensorSet& t, const std::string& path) {
            ident::write_tensor_set(t, path);
        });
    m.def("load_tensor_set", &ident::read_tensor_set, py::arg("path"));

    m.def(
        "identify_tensors",
        [](const fe::FeModel& model, const Mat& v, double alpha_id,
           const ecsw::EcswModel* mesh) {
            const auto plan = ident::plan_displacements(model, v, alpha_id);
            if (mesh) {
                ident::EcswTangentProvider provider(model, *mesh, v);
                return ident::identify_tensors(v, plan, provider);
            }
            ident::ExactTangentProvider provider(model, v);
            return ident::identify_tensors(v, plan, provider);
        },
        py::arg("model"), py::arg("basis"), py::arg("alpha_id"), py::arg("ecsw") = nullptr,
        "EED identification; pass an EcswModel for the hyperreduced provider");
    m.def(
        "direct_projection",
        [](const fe::FeModel& model, const Mat& v) {
            return ident::direct_projection(fe::FullTensors::extract(model), v);
        },
        py::arg("model"), py::arg("basis"));
    m.def("compute_U", &ident::compute_U, py::arg("V"), py::arg("W"));
    m.def("transform_tensors", &ident::transform_tensors, py::arg("tensors"), py::arg("U"));
    m.def("reduced_tangent_exact", &ident::reduced_tangent_exact, py::arg("model"),
          py::arg("basis"), py::arg("q"));

    py::class_<rom::RomModel>(m, "RomModel")
        .def(py::init([](const Mat& mass, const Mat& damping, const ident::TensorSet& tensors,
                         const Vec& load_shape) {
                 rom::RomModel model;
                 model.mass = mass;
                 model.damping = damping;
                 model.tensors = tensors;
                 model.load_shape = load_shape;
                 return model;
             }),
             py::arg("mass"), py::arg("damping"), py::arg("tensors"), py::arg("load_shape"))
        .def_readonly("mass", &rom::RomModel::mass)
        .def_readonly("damping", &rom::RomModel::damping)
        .def_readonly("tensors", &rom::RomModel::tensors)
        .def_readonly("load_shape", &rom::RomModel::load_shape);

    m.def(
        "integrate_rom",
        [](const rom::RomModel& model, const Vec& amplitude, double dt, int n_steps,
           double rel_tol) {
            rom::NewmarkParams params;
            params.rel_tol = rel_tol;
            Mat u_hist(n_steps, model.size());
            Mat v_hist(n_steps, model.size());
            Vec times(n_steps);
            auto amp = [&](double t) {
                const long k = std::lround(t / dt);
                return k >= 0 && k < amplitude.size() ? amplitude[k] : 0.0;
            };
            rom::integrate_rom(model, amp, dt, n_steps, params,
                               [&](int step, double t, const Vec& u, const Vec& v) {
                                   times[step - 1] = t;
                                   u_hist.row(step - 1) = u.transpose();
                                   v_hist.row(step - 1) = v.transpose();
                               });
            return py::make_tuple(times, u_hist, v_hist);
        },
        py::arg("rom"), py::arg("amplitude"), py::arg("dt"), py::arg("n_steps"),
        py::arg("rel_tol") = 1e-8,
        "Newmark integration; returns (times, displacements, velocities)");

    py::class_<loads::LoadSpec>(m, "LoadSpec")
        .def(py::init([](double oaspl_db, double cutoff_hz, int filter_order, double dt,
                         double duration, std::uint64_t seed) {
                 loads::LoadSpec spec{oaspl_db, cutoff_hz, filter_order, dt, duration, seed};
                 spec.validate();
                 return spec;
             }),
             py::arg("oaspl_db") = 144.0, py::arg("cutoff_hz") = 500.0,
             py::arg("filter_order") = 12, py::arg("dt") = 4.167e-5, py::arg("duration") = 10.0,
             py::arg("seed") = 0);

    m.def("gen_pressure", &loads::gen_pressure, py::arg("spec"));
    m.def("welch_psd", &loads::welch_psd, py::arg("series"), py::arg("sample_rate"),
          py::arg("segment_len"), py::arg("overlap") = 0.5);
    m.def("oaspl", &loads::oaspl, py::arg("series"));

    m.def(
        "run_pipeline",
        [](const std::string& config_path, const std::string& mode,
           const std::vector<std::string>& overrides) {
            pipeline::PipelineConfig config = pipeline::parse_config(config_path);
            for (const auto& assignment : overrides) pipeline::apply_override(config, assignment);
            const auto result = pipeline::run_pipeline(config, pipeline::mode_from_string(mode));
            py::dict d = report_to_dict(result.report);
            d["output_dir"] = result.output_dir;
            return d;
        },
        py::arg("config"), py::arg("mode") = "eed-ecsw",
        py::arg("overrides") = std::vector<std::string>{});
    m.def(
        "tolerance_sweep",
        [](const std::string& config_path, const std::vector<double>& taus,
           const std::vector<std::string>& overrides) {
            pipeline::PipelineConfig config = pipeline::parse_config(config_path);
            for (const auto& assignment : overrides) pipeline::apply_override(config, assignment);
            const auto rows = pipeline::tolerance_sweep(config, taus);
            py::list out;
            for (const auto& row : rows) {
                py::dict d;
                d["tau"] = row.tau;
                d["reduced_elements"] = row.reduced_elements;
                d["reduced_fraction"] = row.reduced_fraction;
                d["validation_error"] = row.validation_error;
                d["identification_seconds"] = row.identification_seconds;
                d["speedup"] = row.speedup;
                out.append(d);
            }
            return out;
        },
        py::arg("config"), py::arg("taus"), py::arg("overrides") = std::vector<std::string>{});
}
