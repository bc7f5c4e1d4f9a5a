#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vjm/spatial.hpp"

namespace vjm {

// A kinematic chain is a serial product of elements. Three coordinate
// families drive it:
//   - one actuated coordinate per actuated joint (at most one per chain),
//   - passive coordinates (transmit no torque about their motion axis),
//   - virtual-spring coordinates theta (one per actuated joint, six per
//     six-dof spring).
// Theta indices and passive indices are assigned in element order.

/// Constant rigid segment.
struct RigidLink {
    Transform t;
};

/// One-dof actuated joint with a series virtual spring; the joint factor is
/// the elementary motion by (q_act + theta). Stiffness in N/mm or N·mm/rad.
struct ActuatedJoint {
    ElementaryAxis axis_kind;
    double k_act = 0.0;
};

/// Six-dof virtual spring. The motion factor expands to three elementary
/// translations then three rotations, axis order X, Y, Z; the stiffness
/// matrix rows/columns follow the same ordering.
struct Spring6 {
    Matrix6d stiffness = Matrix6d::Zero();
};

/// Passive universal joint: two successive elementary rotations about
/// distinct axes, in declared order.
struct PassiveU {
    ElementaryAxis axis_first;
    ElementaryAxis axis_second;
};

/// Passive revolute joint.
struct PassiveR {
    ElementaryAxis axis;
};

/// Parallelogram four-bar segment reduced to its equivalent serial factor
/// R_axis(q) * T_x(length) * R_axis(-q): the far-end counter-rotation is
/// structural, so the whole segment consumes a single passive coordinate.
struct ParallelogramLink {
    ElementaryAxis axis;
    double length = 0.0;
};

using ChainElement =
    std::variant<RigidLink, ActuatedJoint, Spring6, PassiveU, PassiveR, ParallelogramLink>;

/// Coordinates for one chain. q_act is meaningful only when the chain has an
/// actuated joint.
struct ChainCoordinates {
    double q_act = 0.0;
    Eigen::VectorXd q_passive;
    Eigen::VectorXd theta;
};

/// Immutable, validated description of one chain. Construction rejects
/// non-positive-definite springs, non-positive joint stiffnesses, passive
/// joints declared on translation axes, coincident universal-joint axes and
/// multiple actuated joints, naming the offending element.
class ChainDescription {
public:
    ChainDescription(std::string name, std::vector<ChainElement> elements);

    const std::string& name() const noexcept { return name_; }
    const std::vector<ChainElement>& elements() const noexcept { return elements_; }

    int actuated_count() const noexcept { return n_actuated_; }
    int passive_count() const noexcept { return n_passive_; }
    int theta_count() const noexcept { return n_theta_; }

    /// All-zero coordinates sized for this chain.
    ChainCoordinates zero_coordinates() const;

    /// Throws std::invalid_argument on a size mismatch.
    void check_coordinates(const ChainCoordinates& coords) const;

private:
    std::string name_;
    std::vector<ChainElement> elements_;
    int n_actuated_ = 0;
    int n_passive_ = 0;
    int n_theta_ = 0;
};

/// Block-diagonal aggregated spring stiffness: one 1x1 block per actuated
/// joint followed elementwise by one 6x6 block per spring, in element order.
class AggregateSpringStiffness {
public:
    struct Block {
        int offset = 0;
        Eigen::MatrixXd k;  // 1x1 or 6x6, positive definite
    };

    explicit AggregateSpringStiffness(std::vector<Block> blocks);

    int size() const noexcept { return size_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    /// Dense matrix; off-block entries are identically zero.
    Eigen::MatrixXd dense() const;
    /// Inverse assembled from blockwise inverses (at most 6x6 inversions).
    Eigen::MatrixXd dense_inverse() const;

private:
    std::vector<Block> blocks_;
    int size_ = 0;
};

/// End-effector pose: the ordered product of all element transforms.
Transform forward_transform(const ChainDescription& chain, const ChainCoordinates& coords);

AggregateSpringStiffness aggregate_spring_stiffness(const ChainDescription& chain);

namespace detail {

/// One factor of the expanded transform product. A factor is either a
/// constant transform or an elementary motion driven by
/// sign * coordinate (+ q_act for the actuated joint's spring factor).
struct Factor {
    enum class Binding { None, ActuatedPlusTheta, Theta, Passive };

    bool constant = false;
    Transform fixed;
    ElementaryAxis axis;
    Binding binding = Binding::None;
    int index = -1;
    double sign = 1.0;
};

std::vector<Factor> factor_sequence(const ChainDescription& chain);
double factor_value(const Factor& f, const ChainCoordinates& coords);
Transform factor_transform(const Factor& f, const ChainCoordinates& coords);

}  // namespace detail

}  // namespace vjm
