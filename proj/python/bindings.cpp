#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "vjm/beam.hpp"
#include "vjm/chain.hpp"
#include "vjm/errors.hpp"
#include "vjm/jacobians.hpp"
#include "vjm/kinetostatics.hpp"
#include "vjm/model_io.hpp"
#include "vjm/orthoglide.hpp"
#include "vjm/validation.hpp"

namespace py = pybind11;

namespace {

std::optional<vjm::Wrench> wrench_from(const std::optional<vjm::Vector6d>& load) {
    if (!load.has_value()) return std::nullopt;
    return vjm::Wrench::from_vec(*load);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kinetostatic stiffness analysis of multi-chain parallel manipulators "
              "(virtual-joint lumped-spring models). Units: mm, N, rad, N·mm.";

    py::register_exception<vjm::WorkspaceError>(m, "WorkspaceError");
    py::register_exception<vjm::NumericalError>(m, "NumericalError");
    py::register_exception<vjm::ModelError>(m, "ModelError");

    // ---- beam sections and link compliance -------------------------------
    py::class_<vjm::RectangleSection>(m, "RectangleSection")
        .def(py::init<double, double>(), py::arg("width"), py::arg("height"))
        .def_readwrite("width", &vjm::RectangleSection::width)
        .def_readwrite("height", &vjm::RectangleSection::height);

    py::class_<vjm::CircleSection>(m, "CircleSection")
        .def(py::init<double>(), py::arg("diameter"))
        .def_readwrite("diameter", &vjm::CircleSection::diameter);

    py::class_<vjm::BeamSpec>(m, "BeamSpec")
        .def(py::init([](double length, double elastic_modulus, double shear_modulus,
                         const vjm::Section& section) {
                 return vjm::BeamSpec{length, elastic_modulus, shear_modulus, section};
             }),
             py::arg("length"), py::arg("elastic_modulus"), py::arg("shear_modulus"),
             py::arg("section"))
        .def_readwrite("length", &vjm::BeamSpec::length)
        .def_readwrite("elastic_modulus", &vjm::BeamSpec::elastic_modulus)
        .def_readwrite("shear_modulus", &vjm::BeamSpec::shear_modulus)
        .def_readwrite("section", &vjm::BeamSpec::section);

    m.def(
        "beam_compliance",
        [](const vjm::BeamSpec& spec) { return vjm::beam_compliance(spec).c; },
        py::arg("spec"),
        "6x6 cantilever compliance of a beam at its free end, local frame");

    m.def(
        "chain_link_compliances",
        [](const std::vector<std::pair<vjm::BeamSpec, Eigen::Matrix4d>>& beams) {
            std::vector<std::pair<vjm::BeamSpec, vjm::Transform>> converted;
            converted.reserve(beams.size());
            for (const auto& [spec, offset] : beams) {
                converted.emplace_back(spec, vjm::Transform::from_matrix(offset));
            }
            return vjm::chain_link_compliances(converted).c;
        },
        py::arg("beams"),
        "Compliance of a serial run of beams given as (spec, 4x4 offset) pairs");

    m.def(
        "load_external_compliance",
        [](const vjm::Matrix6d& c) { return vjm::load_external_compliance(c).c; },
        py::arg("matrix"),
        "Validate and symmetrize an externally computed 6x6 compliance matrix");

    // ---- chains -----------------------------------------------------------
    py::class_<vjm::ChainCoordinates>(m, "ChainCoordinates")
        .def(py::init<>())
        .def_readwrite("q_act", &vjm::ChainCoordinates::q_act)
        .def_readwrite("q_passive", &vjm::ChainCoordinates::q_passive)
        .def_readwrite("theta", &vjm::ChainCoordinates::theta);

    py::class_<vjm::ChainDescription>(m, "ChainDescription")
        .def_property_readonly("name", &vjm::ChainDescription::name)
        .def_property_readonly("passive_count", &vjm::ChainDescription::passive_count)
        .def_property_readonly("theta_count", &vjm::ChainDescription::theta_count)
        .def_property_readonly("actuated_count", &vjm::ChainDescription::actuated_count)
        .def("zero_coordinates", &vjm::ChainDescription::zero_coordinates)
        .def("__repr__", [](const vjm::ChainDescription& c) {
            return "<ChainDescription '" + c.name() + "' theta=" +
                   std::to_string(c.theta_count()) + " passive=" +
                   std::to_string(c.passive_count()) + ">";
        });

    m.def(
        "forward_transform",
        [](const vjm::ChainDescription& chain, const vjm::ChainCoordinates& coords) {
            return vjm::forward_transform(chain, coords).matrix();
        },
        py::arg("chain"), py::arg("coords"), "End-effector pose as a homogeneous 4x4 matrix");

    m.def(
        "chain_jacobians",
        [](const vjm::ChainDescription& chain, const vjm::ChainCoordinates& coords) {
            const vjm::ChainJacobians jac = vjm::chain_jacobians(chain, coords);
            return py::make_tuple(Eigen::MatrixXd(jac.j_theta), Eigen::MatrixXd(jac.j_q));
        },
        py::arg("chain"), py::arg("coords"), "(j_theta, j_q) at the posture, base axes");

    m.def(
        "finite_difference_jacobians",
        [](const vjm::ChainDescription& chain, const vjm::ChainCoordinates& coords, double step) {
            const vjm::ChainJacobians jac = vjm::finite_difference_jacobians(chain, coords, step);
            return py::make_tuple(Eigen::MatrixXd(jac.j_theta), Eigen::MatrixXd(jac.j_q));
        },
        py::arg("chain"), py::arg("coords"), py::arg("step") = 1e-6,
        "Central-difference Jacobian oracle");

    py::class_<vjm::ChainStiffnessResult>(m, "ChainStiffnessResult")
        .def_readonly("k_chain", &vjm::ChainStiffnessResult::k_chain)
        .def_readonly("rank", &vjm::ChainStiffnessResult::rank)
        .def_readonly("passive_rank", &vjm::ChainStiffnessResult::passive_rank);

    m.def("chain_stiffness_unloaded", &vjm::chain_stiffness_unloaded, py::arg("chain"),
          py::arg("coords"), "6x6 Cartesian stiffness of one chain, unloaded equilibrium");

    m.def(
        "chain_stiffness_loaded",
        [](const vjm::ChainDescription& chain, const vjm::ChainCoordinates& coords,
           const vjm::Vector6d& wrench, double fd_step) {
            return vjm::chain_stiffness_loaded(chain, coords, vjm::Wrench::from_vec(wrench),
                                               fd_step);
        },
        py::arg("chain"), py::arg("coords"), py::arg("wrench"), py::arg("fd_step") = 1e-6,
        "Chain stiffness about a loaded equilibrium; wrench is (fx fy fz mx my mz)");

    // ---- manipulator-level results ----------------------------------------
    py::class_<vjm::StiffnessIndices>(m, "StiffnessIndices")
        .def_readonly("k_tran", &vjm::StiffnessIndices::k_tran)
        .def_readonly("k_rot", &vjm::StiffnessIndices::k_rot)
        .def("__repr__", [](const vjm::StiffnessIndices& s) {
            return "<StiffnessIndices k_tran=" + std::to_string(s.k_tran) +
                   " k_rot=" + std::to_string(s.k_rot) + ">";
        });

    py::class_<vjm::ManipulatorStiffness>(m, "ManipulatorStiffness")
        .def_readonly("k_total", &vjm::ManipulatorStiffness::k_total)
        .def_readonly("per_chain", &vjm::ManipulatorStiffness::per_chain)
        .def("indices",
             [](const vjm::ManipulatorStiffness& ms) { return vjm::stiffness_indices(ms); })
        .def(
            "deflection",
            [](const vjm::ManipulatorStiffness& ms, const vjm::Vector6d& wrench) {
                return vjm::deflection_under_load(ms, vjm::Wrench::from_vec(wrench)).vec();
            },
            py::arg("wrench"), "End-effector displacement (dp, dphi) under a wrench");

    m.def(
        "manipulator_stiffness",
        [](const std::vector<vjm::ChainDescription>& chains,
           const std::vector<vjm::ChainCoordinates>& coords,
           const std::optional<vjm::Vector6d>& load, double fd_step) {
            if (chains.size() != coords.size()) {
                throw std::invalid_argument("chains and coords must have equal length");
            }
            std::vector<std::pair<const vjm::ChainDescription*, const vjm::ChainCoordinates*>>
                pairs;
            pairs.reserve(chains.size());
            for (std::size_t i = 0; i < chains.size(); ++i) {
                pairs.emplace_back(&chains[i], &coords[i]);
            }
            return vjm::manipulator_stiffness(pairs, wrench_from(load), fd_step);
        },
        py::arg("chains"), py::arg("coords"), py::arg("load") = std::nullopt,
        py::arg("fd_step") = 1e-6, "Aggregate chains sharing one end-effector pose");

    m.def(
        "stiffness_indices",
        [](const vjm::Matrix6d& k) { return vjm::stiffness_indices(k); }, py::arg("k_total"),
        "Minimum eigenvalues of the translational and rotational blocks");

    m.def("matrix_rank", &vjm::matrix_rank, py::arg("matrix"), py::arg("rel_tol") = 1e-10);

    // ---- manipulator builders ---------------------------------------------
    py::class_<vjm::OrthoglideParams>(m, "OrthoglideParams")
        .def(py::init<>())
        .def_readwrite("leg_length", &vjm::OrthoglideParams::leg_length)
        .def_readwrite("foot_beam", &vjm::OrthoglideParams::foot_beam)
        .def_readwrite("bar_beam", &vjm::OrthoglideParams::bar_beam)
        .def_readwrite("parallelogram_width", &vjm::OrthoglideParams::parallelogram_width)
        .def_readwrite("actuator_stiffness", &vjm::OrthoglideParams::actuator_stiffness)
        .def_readwrite("rail_offsets", &vjm::OrthoglideParams::rail_offsets);

    py::enum_<vjm::OrthoglideVariant>(m, "OrthoglideVariant")
        .value("THREE_PUU", vjm::OrthoglideVariant::ThreePuu)
        .value("THREE_PRPAR", vjm::OrthoglideVariant::ThreePrpar);

    py::class_<vjm::PosturedManipulator>(m, "PosturedManipulator")
        .def_readonly("chains", &vjm::PosturedManipulator::chains)
        .def_readonly("coords", &vjm::PosturedManipulator::coords)
        .def_readonly("near_singular", &vjm::PosturedManipulator::near_singular)
        .def_property_readonly("end_pose",
                               [](const vjm::PosturedManipulator& pm) {
                                   return pm.end_pose.matrix();
                               })
        .def(
            "stiffness",
            [](const vjm::PosturedManipulator& pm, const std::optional<vjm::Vector6d>& load,
               double fd_step) { return pm.stiffness(wrench_from(load), fd_step); },
            py::arg("load") = std::nullopt, py::arg("fd_step") = 1e-6);

    py::class_<vjm::Manipulator>(m, "Manipulator")
        .def_property_readonly("variant", &vjm::Manipulator::variant)
        .def("at", &vjm::Manipulator::at, py::arg("target"),
             "Posture of the manipulator at a target point (mm)")
        .def("with_leg_spring", &vjm::Manipulator::with_leg_spring, py::arg("k"),
             "Copy with the leg spring replaced by a fixed 6x6 stiffness");

    m.def("build_3puu", &vjm::build_3puu, py::arg("params"));
    m.def("build_3prpar", &vjm::build_3prpar, py::arg("params"));

    m.def(
        "parallelogram_compliance",
        [](const vjm::OrthoglideParams& params, double q2) {
            return vjm::parallelogram_compliance(params, q2).c;
        },
        py::arg("params"), py::arg("q2"),
        "Equivalent 6x6 compliance of the parallelogram at bar angle q2");

    m.def("inverse_kinematics", &vjm::inverse_kinematics, py::arg("params"), py::arg("variant"),
          py::arg("target"), "Per-chain coordinate vectors reaching the target");
    m.def("reachable", &vjm::reachable, py::arg("params"), py::arg("target"));
    m.def("reference_study_points", &vjm::reference_study_points);

    py::class_<vjm::ComparativeEntry>(m, "ComparativeEntry")
        .def_readonly("k_total", &vjm::ComparativeEntry::k_total)
        .def_readonly("compliance", &vjm::ComparativeEntry::compliance)
        .def_readonly("indices", &vjm::ComparativeEntry::indices)
        .def_readonly("rank", &vjm::ComparativeEntry::rank);

    py::class_<vjm::ComparativeRow>(m, "ComparativeRow")
        .def_readonly("point", &vjm::ComparativeRow::point)
        .def_readonly("puu", &vjm::ComparativeRow::puu)
        .def_readonly("prpar", &vjm::ComparativeRow::prpar)
        .def_readonly("rotational_ratio", &vjm::ComparativeRow::rotational_ratio)
        .def_readonly("translational_ratio", &vjm::ComparativeRow::translational_ratio);

    m.def("comparative_study", &vjm::comparative_study, py::arg("params"), py::arg("points"),
          "Side-by-side stiffness study of the two leg architectures");

    // ---- model documents ---------------------------------------------------
    py::class_<vjm::ModelDocument>(m, "ModelDocument")
        .def_property_readonly("is_builder", &vjm::ModelDocument::is_builder)
        .def_property_readonly("schema_version",
                               [](const vjm::ModelDocument& d) { return d.schema_version; })
        .def_property_readonly("builder_variant",
                               [](const vjm::ModelDocument& d) { return d.builder().variant; })
        .def_property_readonly("builder_params",
                               [](const vjm::ModelDocument& d) { return d.builder().params; })
        .def_property_readonly("chains",
                               [](const vjm::ModelDocument& d) { return d.explicit_model().chains; })
        .def_property_readonly("coords",
                               [](const vjm::ModelDocument& d) { return d.explicit_model().coords; });

    m.def("load_model", &vjm::load_model_file, py::arg("path"),
          "Parse and validate a model JSON document");
}
