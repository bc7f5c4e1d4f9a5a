#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vjm/chain.hpp"
#include "vjm/jacobians.hpp"

namespace vjm {

/// Force in N, torque in N·mm, applied at the end-effector, base axes.
struct Wrench {
    Eigen::Vector3d force = Eigen::Vector3d::Zero();
    Eigen::Vector3d torque = Eigen::Vector3d::Zero();

    Vector6d vec() const {
        Vector6d v;
        v << force, torque;
        return v;
    }
    static Wrench from_vec(const Vector6d& v) { return {v.head<3>(), v.tail<3>()}; }
    bool is_zero() const { return force.isZero(0.0) && torque.isZero(0.0); }
};

/// Cartesian stiffness of a single chain. `rank` is the numerical rank of
/// k_chain; `passive_rank` the rank of the passive-joint Jacobian at the
/// posture. In generic postures rank = 6 - passive_rank.
struct ChainStiffnessResult {
    Matrix6d k_chain = Matrix6d::Zero();
    int rank = 0;
    int passive_rank = 0;
};

struct ManipulatorStiffness {
    Matrix6d k_total = Matrix6d::Zero();
    std::vector<ChainStiffnessResult> per_chain;
};

/// Worst-direction scalar reductions: the minimum eigenvalues of the
/// translational (N/mm) and rotational (N·mm/rad) 3x3 diagonal blocks.
struct StiffnessIndices {
    double k_tran = 0.0;
    double k_rot = 0.0;
};

/// Rank-revealing pseudo-inverse of a symmetric matrix via spectral
/// decomposition; eigenvalues with |lambda| <= rel_tol * max|lambda| are
/// treated as zero.
struct SpectralPseudoInverse {
    Eigen::MatrixXd pinv;
    int rank = 0;
};
SpectralPseudoInverse symmetric_pseudo_inverse(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

/// Numerical rank from singular values with the same relative threshold.
int matrix_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

/// Unloaded chain stiffness. Assembles the saddle system
///   [ S_theta  J_q ] [ f  ]   [ dt ]      S_theta = J_theta K_theta^-1 J_theta^T
///   [ J_q^T     0  ] [ dq ] = [ 0  ],
/// pseudo-inverts it rank-revealingly and returns the 6x6 block of the
/// (pseudo-)inverse at the S_theta position. Rank-deficient systems (singular
/// postures, redundant passive joints) are not an error: the pseudo-inverse
/// path is taken and the reported rank drops accordingly.
/// Coordinates are expected at theta = 0 (the unloaded linearization point).
ChainStiffnessResult chain_stiffness_unloaded(const ChainDescription& chain,
                                              const ChainCoordinates& coords);

/// Force and passive motion produced by a prescribed end-effector
/// displacement, from the same solve as chain_stiffness_unloaded.
struct ChainResponse {
    Vector6d f = Vector6d::Zero();
    Eigen::VectorXd dq;
};
ChainResponse chain_response_unloaded(const ChainDescription& chain,
                                      const ChainCoordinates& coords, const Vector6d& dt);

/// Loaded-equilibrium chain stiffness. The coordinates must describe a static
/// equilibrium under f_ext; the spring block gains the configuration
/// derivative of the joint reaction,
///   S_theta = J_theta (K_theta - d(J_theta^T f)/d theta)^-1 J_theta^T,
///   S_q     = d(J_q^T f)/d q  (placed in the lower-right block),
/// with both derivatives taken by central differences of step fd_step per
/// coordinate. The result may carry a skew part. Throws NumericalError when
/// the modified spring block loses positive definiteness (buckling-type
/// load), reporting the offending eigenvalue.
ChainStiffnessResult chain_stiffness_loaded(const ChainDescription& chain,
                                            const ChainCoordinates& coords, const Wrench& f_ext,
                                            double fd_step = 1e-6);

/// Sum of per-chain stiffnesses at a shared end-effector pose. Verifies that
/// all chains close on one pose (1e-6 mm translation, 1e-8 rad rotation) and
/// throws ConsistencyError otherwise. With a nonzero load, the wrench is
/// distributed across chains by the first-order split f_i = K_i K_m^+ f
/// computed from the unloaded stiffnesses, and each chain is re-solved with
/// its loaded model.
ManipulatorStiffness manipulator_stiffness(
    const std::vector<std::pair<const ChainDescription*, const ChainCoordinates*>>& chains,
    const std::optional<Wrench>& load = std::nullopt, double fd_step = 1e-6);

/// dt = k_total^-1 w. Throws NumericalError when k_total is rank deficient,
/// reporting the rank and a null-space basis.
SmallDisplacement deflection_under_load(const ManipulatorStiffness& ms, const Wrench& w);

StiffnessIndices stiffness_indices(const Matrix6d& k_total);
StiffnessIndices stiffness_indices(const ManipulatorStiffness& ms);

}  // namespace vjm
