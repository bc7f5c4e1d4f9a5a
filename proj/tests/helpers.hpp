#pragma once

// Shared fixtures for the test suites: a hand-built reference chain matching
// the canonical one-actuator / two-spring / four-passive-dof leg layout, plus
// small numeric oracles that stay independent of the library paths they
// check.

#include <cmath>
#include <numbers>
#include <vector>

#include "vjm/beam.hpp"
#include "vjm/chain.hpp"
#include "vjm/validation.hpp"

namespace vjm::testing {

inline Matrix6d reference_foot_stiffness() {
    return beam_compliance({150.0, 2.1e5, 8.0e4, RectangleSection{26.0, 36.0}}).stiffness();
}

inline Matrix6d reference_leg_stiffness() {
    // Doubled-area square bar, elastic length equal to the leg span.
    const double s = 16.0 * std::numbers::sqrt2;
    return beam_compliance({310.0, 2.1e5, 8.0e4, RectangleSection{s, s}}).stiffness();
}

/// The 13-spring / 4-passive-dof reference chain: prismatic actuator along x,
/// foot body and spring, bracket flip, U joint, leg body and spring, U joint,
/// tool. Built by hand so chain-level tests do not depend on the manipulator
/// builders.
inline ChainDescription reference_chain() {
    std::vector<ChainElement> elements;
    elements.push_back(RigidLink{Transform::identity()});
    elements.push_back(ActuatedJoint{translation_along(Axis::X), 1.0e4});
    elements.push_back(RigidLink{Transform::translation(Axis::X, 150.0)});
    elements.push_back(Spring6{reference_foot_stiffness()});
    elements.push_back(RigidLink{Transform::rotation(Axis::Z, std::numbers::pi)});
    elements.push_back(PassiveU{rotation_about(Axis::Z), rotation_about(Axis::Y)});
    elements.push_back(RigidLink{Transform::translation(Axis::X, 310.0)});
    elements.push_back(Spring6{reference_leg_stiffness()});
    elements.push_back(PassiveU{rotation_about(Axis::Y), rotation_about(Axis::Z)});
    elements.push_back(RigidLink{Transform::rotation(Axis::Z, -std::numbers::pi)});
    return ChainDescription("reference-chain", std::move(elements));
}

/// Rotation-matrix exponential by scaling-and-squaring on the Taylor series;
/// a deliberately naive oracle for the closed-form elementary rotations.
inline Eigen::Matrix3d matrix_exponential(const Eigen::Matrix3d& m) {
    int squarings = 0;
    Eigen::Matrix3d a = m;
    while (a.cwiseAbs().maxCoeff() > 0.125) {
        a *= 0.5;
        ++squarings;
    }
    Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
    for (int k = 1; k <= 24; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = a.cwiseAbs().maxCoeff();
    return scale > 0.0 ? max_abs_diff(a, b) / scale : max_abs_diff(a, b);
}

}  // namespace vjm::testing
