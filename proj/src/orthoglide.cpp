#include "vjm/orthoglide.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vjm/errors.hpp"

namespace vjm {

namespace {

constexpr double kPi = std::numbers::pi;

const char* chain_axis_label(int i) {
    return i == 0 ? "x-chain" : (i == 1 ? "y-chain" : "z-chain");
}

/// Cyclic base rotation of chain i: local x maps onto the chain's rail axis.
Eigen::Matrix3d base_rotation(int i) {
    Eigen::Matrix3d c;
    // columns: images of local x, y, z
    c << 0, 0, 1,
         1, 0, 0,
         0, 1, 0;
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    for (int k = 0; k < i; ++k) r = c * r;
    return r;
}

struct ChainSprings {
    Matrix6d foot = Matrix6d::Zero();
    Matrix6d leg = Matrix6d::Zero();
};

ChainDescription make_chain(const OrthoglideParams& p, OrthoglideVariant variant, int index,
                            const ChainSprings& springs) {
    const Transform t_base = Transform(base_rotation(index), Eigen::Vector3d::Zero()) *
                             Transform::translation(Axis::X, p.rail_offsets[index]);
    const Transform bracket_flip = Transform::rotation(Axis::Z, kPi);
    // The bracket flip and the base rotation both cancel in the tool
    // transform so that every chain ends in the common base-aligned frame.
    const Transform t_tool = (Transform(base_rotation(index), Eigen::Vector3d::Zero()) *
                              bracket_flip)
                                 .inverse();

    std::vector<ChainElement> elements;
    elements.push_back(RigidLink{t_base});
    elements.push_back(ActuatedJoint{translation_along(Axis::X), p.actuator_stiffness});
    elements.push_back(RigidLink{Transform::translation(Axis::X, p.foot_beam.length)});
    elements.push_back(Spring6{springs.foot});
    elements.push_back(RigidLink{bracket_flip});
    if (variant == OrthoglideVariant::ThreePuu) {
        elements.push_back(PassiveU{rotation_about(Axis::Z), rotation_about(Axis::Y)});
        elements.push_back(RigidLink{Transform::translation(Axis::X, p.leg_length)});
        elements.push_back(Spring6{springs.leg});
        elements.push_back(PassiveU{rotation_about(Axis::Y), rotation_about(Axis::Z)});
    } else {
        elements.push_back(PassiveR{rotation_about(Axis::Z)});
        elements.push_back(ParallelogramLink{rotation_about(Axis::Y), p.leg_length});
        elements.push_back(Spring6{springs.leg});
        elements.push_back(PassiveR{rotation_about(Axis::Z)});
    }
    elements.push_back(RigidLink{t_tool});

    std::ostringstream name;
    name << variant_name(variant) << "/" << chain_axis_label(index);
    return ChainDescription(name.str(), std::move(elements));
}

}  // namespace

void OrthoglideParams::validate() const {
    if (!(leg_length > 0.0) || !(parallelogram_width > 0.0) || !(actuator_stiffness > 0.0)) {
        throw ModelError("manipulator parameters must be positive");
    }
    // Surfaces bad beam data before any chain is built.
    beam_compliance(foot_beam);
    beam_compliance(bar_beam);
}

const char* variant_name(OrthoglideVariant v) {
    return v == OrthoglideVariant::ThreePuu ? "3-puu" : "3-prpar";
}

Section doubled_area_section(const Section& s) {
    const double scale = std::numbers::sqrt2;
    if (const auto* rect = std::get_if<RectangleSection>(&s)) {
        return RectangleSection{rect->width * scale, rect->height * scale};
    }
    return CircleSection{std::get<CircleSection>(s).diameter * scale};
}

ChainIk chain_inverse_kinematics(const OrthoglideParams& params, int chain_index,
                                 const Eigen::Vector3d& target) {
    const double l = params.leg_length;
    Eigen::Vector3d t = base_rotation(chain_index).transpose() * target;
    t.x() -= params.rail_offsets[chain_index];

    ChainIk ik;
    ik.discriminant = l * l - t.y() * t.y() - t.z() * t.z();
    if (ik.discriminant < -1e-9 * l * l) {
        std::ostringstream os;
        os << chain_axis_label(chain_index) << " cannot reach (" << target.transpose()
           << ") mm: leg sphere deficit " << -ik.discriminant << " mm^2";
        throw WorkspaceError(os.str(), chain_axis_label(chain_index));
    }
    ik.discriminant = std::max(ik.discriminant, 0.0);
    const double reach = std::sqrt(ik.discriminant);

    const double s2 = std::clamp(-t.z() / l, -1.0, 1.0);
    ik.q2 = std::asin(s2);
    const double c2 = std::cos(ik.q2);
    if (c2 < 1e-9) {
        ik.q1 = 0.0;  // gimbal: the q1 axis is undetermined, fix it
        ik.near_singular = true;
    } else {
        const double s1 = std::clamp(-t.y() / (l * c2), -1.0, 1.0);
        ik.q1 = std::asin(s1);
    }
    ik.q0 = t.x() + reach - params.foot_beam.length;
    if (reach < 1e-6 * l) ik.near_singular = true;  // leg perpendicular to the rail
    return ik;
}

std::array<ChainCoordinates, 3> inverse_kinematics(const OrthoglideParams& params,
                                                   OrthoglideVariant variant,
                                                   const Eigen::Vector3d& target) {
    std::array<ChainCoordinates, 3> out;
    for (int i = 0; i < 3; ++i) {
        const ChainIk ik = chain_inverse_kinematics(params, i, target);
        ChainCoordinates c;
        c.q_act = ik.q0;
        if (variant == OrthoglideVariant::ThreePuu) {
            c.q_passive = Eigen::Vector4d(ik.q1, ik.q2, -ik.q2, -ik.q1);
        } else {
            c.q_passive = Eigen::Vector3d(ik.q1, ik.q2, -ik.q1);
        }
        c.theta = Eigen::VectorXd::Zero(13);
        out[i] = std::move(c);
    }
    return out;
}

bool reachable(const OrthoglideParams& params, const Eigen::Vector3d& target) {
    const double l = params.leg_length;
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d t = base_rotation(i).transpose() * target;
        if (l * l - t.y() * t.y() - t.z() * t.z() < 0.0) return false;
    }
    return true;
}

LinkCompliance parallelogram_compliance(const OrthoglideParams& params, double q2,
                                        std::optional<double> mechanism_filler) {
    if (!(std::abs(q2) < kPi / 2.0)) {
        throw std::invalid_argument("parallelogram angle must satisfy |q2| < pi/2");
    }
    params.validate();
    const double span = params.leg_length;
    const double half_d = 0.5 * params.parallelogram_width;
    const Matrix6d k_bar = beam_compliance(params.bar_beam).stiffness();

    Matrix6d k_sum = Matrix6d::Zero();
    for (const double side : {+1.0, -1.0}) {
        std::vector<ChainElement> elements;
        elements.push_back(RigidLink{Transform::from_translation({0.0, 0.0, side * half_d})});
        elements.push_back(PassiveR{rotation_about(Axis::Y)});
        elements.push_back(RigidLink{Transform::translation(Axis::X, span)});
        elements.push_back(Spring6{k_bar});
        elements.push_back(PassiveR{rotation_about(Axis::Y)});
        elements.push_back(RigidLink{Transform::from_translation({0.0, 0.0, -side * half_d})});
        const ChainDescription path(side > 0 ? "upper-bar" : "lower-bar", std::move(elements));

        ChainCoordinates coords = path.zero_coordinates();
        coords.q_passive << q2, -q2;
        k_sum += chain_stiffness_unloaded(path, coords).k_chain;
    }

    // The pinned two-path sum is exactly singular along the segment's own
    // motion direction (pure translation perpendicular to the bars, in
    // plane). Complete it so the spring stays positive definite; the value is
    // shunted by the equivalent passive joint.
    Vector6d mech = Vector6d::Zero();
    mech.head<3>() = Eigen::Vector3d(std::sin(q2), 0.0, std::cos(q2));
    const SectionProperties sp = section_properties(params.bar_beam.section);
    const double filler = mechanism_filler.value_or(
        24.0 * params.bar_beam.elastic_modulus * sp.i_y / (span * span * span));
    k_sum += filler * (mech * mech.transpose());

    const Matrix6d k_sym = 0.5 * (k_sum + k_sum.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(k_sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "parallelogram stiffness not positive definite (min eigenvalue "
           << es.eigenvalues().minCoeff() << ")";
        throw NumericalError(os.str());
    }
    const Matrix6d c = k_sym.inverse();
    return {0.5 * (c + c.transpose()), ComplianceSource::BeamChain};
}

Manipulator::Manipulator(OrthoglideVariant variant, OrthoglideParams params,
                         std::optional<Matrix6d> leg_spring_override)
    : variant_(variant), params_(std::move(params)),
      leg_spring_override_(std::move(leg_spring_override)) {
    params_.validate();
}

Manipulator Manipulator::with_leg_spring(const Matrix6d& k) const {
    return Manipulator(variant_, params_, k);
}

PosturedManipulator Manipulator::at(const Eigen::Vector3d& target) const {
    ChainSprings springs;
    springs.foot = beam_compliance(params_.foot_beam).stiffness();

    BeamSpec limb = params_.bar_beam;
    limb.section = doubled_area_section(limb.section);
    const Matrix6d k_limb = beam_compliance(limb).stiffness();

    PosturedManipulator pm;
    pm.end_pose = Transform::from_translation(target);
    for (int i = 0; i < 3; ++i) {
        const ChainIk ik = chain_inverse_kinematics(params_, i, target);
        pm.near_singular[static_cast<std::size_t>(i)] = ik.near_singular;

        if (leg_spring_override_.has_value()) {
            springs.leg = *leg_spring_override_;
        } else if (variant_ == OrthoglideVariant::ThreePuu) {
            springs.leg = k_limb;
        } else {
            springs.leg = parallelogram_compliance(params_, ik.q2).stiffness();
        }
        pm.chains.push_back(make_chain(params_, variant_, i, springs));

        ChainCoordinates c = pm.chains.back().zero_coordinates();
        c.q_act = ik.q0;
        if (variant_ == OrthoglideVariant::ThreePuu) {
            c.q_passive << ik.q1, ik.q2, -ik.q2, -ik.q1;
        } else {
            c.q_passive << ik.q1, ik.q2, -ik.q1;
        }
        pm.coords.push_back(std::move(c));
    }
    return pm;
}

ManipulatorStiffness PosturedManipulator::stiffness(const std::optional<Wrench>& load,
                                                    double fd_step) const {
    std::vector<std::pair<const ChainDescription*, const ChainCoordinates*>> pairs;
    pairs.reserve(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) {
        pairs.emplace_back(&chains[i], &coords[i]);
    }
    return manipulator_stiffness(pairs, load, fd_step);
}

Manipulator build_3puu(const OrthoglideParams& params) {
    return Manipulator(OrthoglideVariant::ThreePuu, params);
}

Manipulator build_3prpar(const OrthoglideParams& params) {
    return Manipulator(OrthoglideVariant::ThreePrpar, params);
}

std::vector<ComparativeRow> comparative_study(const OrthoglideParams& params,
                                              const std::vector<Eigen::Vector3d>& points) {
    const Manipulator puu = build_3puu(params);
    const Manipulator prpar = build_3prpar(params);

    const auto evaluate = [](const Manipulator& m, const Eigen::Vector3d& p) {
        const ManipulatorStiffness ms = m.at(p).stiffness();
        ComparativeEntry e;
        e.k_total = ms.k_total;
        e.compliance = symmetric_pseudo_inverse(ms.k_total).pinv;
        e.indices = stiffness_indices(ms);
        e.rank = matrix_rank(ms.k_total);
        return e;
    };

    std::vector<ComparativeRow> rows;
    rows.reserve(points.size());
    for (const Eigen::Vector3d& p : points) {
        ComparativeRow row;
        row.point = p;
        row.puu = evaluate(puu, p);
        row.prpar = evaluate(prpar, p);
        row.rotational_ratio = row.prpar.indices.k_rot / row.puu.indices.k_rot;
        row.translational_ratio = row.prpar.indices.k_tran / row.puu.indices.k_tran;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Eigen::Vector3d> reference_study_points() {
    return {{0.0, 0.0, 0.0}, {-73.65, 0.0, 0.0}, {126.35, 0.0, 0.0}};
}

}  // namespace vjm
