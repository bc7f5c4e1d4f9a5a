#pragma once

#include <Eigen/Dense>

#include "vjm/chain.hpp"

namespace vjm {

/// End-effector sensitivity columns at one posture. Each column is the
/// first-order end-effector displacement (dp at the end-effector origin,
/// dphi; both expressed in base axes) per unit coordinate variation.
struct ChainJacobians {
    Eigen::Matrix<double, 6, Eigen::Dynamic> j_theta;  // one column per spring coordinate
    Eigen::Matrix<double, 6, Eigen::Dynamic> j_q;      // one column per passive coordinate
};

/// Analytic Jacobians. Each elementary factor V(c) in the transform product
/// is differentiated in closed form via T_before * g * V(c) * T_after, where
/// g is the factor's motion generator and T_before, T_after are held constant
/// at the evaluation point. Coordinates driving several factors (parallelogram
/// segments) accumulate one term per factor.
ChainJacobians chain_jacobians(const ChainDescription& chain, const ChainCoordinates& coords);

/// Central-difference validation oracle: column k is
/// [disp(T0 -> T(+step)) - disp(T0 -> T(-step))] / (2 step).
/// Throws std::invalid_argument unless step > 0.
ChainJacobians finite_difference_jacobians(const ChainDescription& chain,
                                           const ChainCoordinates& coords, double step);

}  // namespace vjm
