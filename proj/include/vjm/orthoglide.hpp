#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vjm/beam.hpp"
#include "vjm/chain.hpp"
#include "vjm/kinetostatics.hpp"

namespace vjm {

/// Parameters of the three-axis translational manipulator family.
///
/// The kinematic model is the zero-offset idealization: three mutually
/// orthogonal rails through the origin along x, y, z; each carriage connects
/// through a foot bracket of length foot_beam.length to a leg of length
/// leg_length that attaches at the end-effector point. leg_length is the
/// pivot-to-pivot span used by the geometry; bar_beam.length is the elastic
/// length of a limb/parallelogram bar (normally the same value).
struct OrthoglideParams {
    double leg_length = 310.0;  // mm
    BeamSpec foot_beam{150.0, 2.1e5, 8.0e4, RectangleSection{26.0, 36.0}};
    BeamSpec bar_beam{310.0, 2.1e5, 8.0e4, RectangleSection{16.0, 16.0}};
    double parallelogram_width = 80.0;  // mm, pivot separation
    double actuator_stiffness = 1.0e4;  // N/mm
    std::array<double, 3> rail_offsets{0.0, 0.0, 0.0};  // mm, shift of each actuated zero

    /// Throws ModelError on non-positive dimensions.
    void validate() const;
};

enum class OrthoglideVariant {
    /// Legs are single equivalent limbs (bars of doubled cross-section area)
    /// with universal joints at both ends.
    ThreePuu,
    /// Legs are parallelograms: revolute, equivalent parallelogram segment,
    /// revolute; the far-side counter-rotation is structural.
    ThreePrpar,
};

const char* variant_name(OrthoglideVariant v);

/// Per-chain inverse kinematics output. Passive angles beyond (q1, q2) follow
/// from the rigid-motion constraints q3 = -q2, q4 = -q1.
struct ChainIk {
    double q0 = 0.0;  // actuated coordinate, mm
    double q1 = 0.0;  // first passive rotation (about local z), rad
    double q2 = 0.0;  // second passive rotation (about local y), rad
    double discriminant = 0.0;  // mm^2; zero on the workspace boundary
    bool near_singular = false;
};

/// One manipulator posture: three validated chains with coordinates closing
/// on a common end pose.
struct PosturedManipulator {
    std::vector<ChainDescription> chains;
    std::vector<ChainCoordinates> coords;
    Transform end_pose;
    std::array<bool, 3> near_singular{false, false, false};

    ManipulatorStiffness stiffness(const std::optional<Wrench>& load = std::nullopt,
                                   double fd_step = 1e-6) const;
};

/// Immutable manipulator builder: holds the parameter set and variant,
/// produces postures on demand.
class Manipulator {
public:
    Manipulator(OrthoglideVariant variant, OrthoglideParams params,
                std::optional<Matrix6d> leg_spring_override = std::nullopt);

    OrthoglideVariant variant() const noexcept { return variant_; }
    const OrthoglideParams& params() const noexcept { return params_; }

    /// Solve the inverse kinematics for `target` (mm, base frame) and build
    /// the three chains at that posture. Throws WorkspaceError when a chain
    /// cannot reach the target.
    PosturedManipulator at(const Eigen::Vector3d& target) const;

    /// Copy with the leg spring replaced by a fixed matrix (ablation studies).
    Manipulator with_leg_spring(const Matrix6d& k) const;

private:
    OrthoglideVariant variant_;
    OrthoglideParams params_;
    std::optional<Matrix6d> leg_spring_override_;
};

Manipulator build_3puu(const OrthoglideParams& params);
Manipulator build_3prpar(const OrthoglideParams& params);

/// Section with doubled area (each transverse dimension scaled by sqrt 2);
/// the sizing rule for the equivalent single-limb legs.
Section doubled_area_section(const Section& s);

/// Inverse kinematics of one chain (0 = x, 1 = y, 2 = z). The actuated
/// coordinate solves (t_x - rho)^2 + t_y^2 + t_z^2 = L^2 on the branch
/// rho > t_x; the posture is flagged near-singular on the workspace boundary
/// (leg perpendicular to the rail) and at the q2 = +-pi/2 gimbal, where q1 is
/// fixed to 0 by convention.
ChainIk chain_inverse_kinematics(const OrthoglideParams& params, int chain_index,
                                 const Eigen::Vector3d& target);

/// All three chains' coordinate vectors for the given variant.
std::array<ChainCoordinates, 3> inverse_kinematics(const OrthoglideParams& params,
                                                   OrthoglideVariant variant,
                                                   const Eigen::Vector3d& target);

/// True when all three discriminants are non-negative.
bool reachable(const OrthoglideParams& params, const Eigen::Vector3d& target);

/// Equivalent six-dof compliance of the parallelogram at bar angle q2
/// (|q2| < pi/2), expressed at the platform-side center in the parallelogram
/// base frame. Built from the two pin-ended bar paths ("upper" and "lower"),
/// whose stiffnesses add in parallel. That sum is singular along the
/// parallelogram's own motion direction; the returned matrix completes that
/// direction with the bars' locked-pivot bending stiffness (overridable via
/// mechanism_filler). The completion is inert in chain solves because the
/// equivalent joint relaxes exactly that direction.
LinkCompliance parallelogram_compliance(const OrthoglideParams& params, double q2,
                                        std::optional<double> mechanism_filler = std::nullopt);

/// Side-by-side stiffness study of the two variants.
struct ComparativeEntry {
    Matrix6d k_total = Matrix6d::Zero();
    Matrix6d compliance = Matrix6d::Zero();  // pseudo-inverse when rank < 6
    StiffnessIndices indices;
    int rank = 0;
};

struct ComparativeRow {
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    ComparativeEntry puu;
    ComparativeEntry prpar;
    double rotational_ratio = 0.0;     // prpar.k_rot / puu.k_rot
    double translational_ratio = 0.0;  // prpar.k_tran / puu.k_tran
};

std::vector<ComparativeRow> comparative_study(const OrthoglideParams& params,
                                              const std::vector<Eigen::Vector3d>& points);

/// The three study postures used throughout the docs and tests, on the x
/// axis: the isotropic home point and the two workspace-diagonal extremes
/// mapped to a single rail direction.
std::vector<Eigen::Vector3d> reference_study_points();

}  // namespace vjm
