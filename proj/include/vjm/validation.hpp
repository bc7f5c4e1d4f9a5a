#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vjm/chain.hpp"
#include "vjm/kinetostatics.hpp"

namespace vjm {

/// Deterministic random source. Wraps a fixed-algorithm 64-bit generator and
/// derives doubles from the raw bits directly, so sequences are reproducible
/// across standard libraries for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform01();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds

private:
    std::uint64_t state_;
};

/// Random orthonormal rotation with det +1.
Eigen::Matrix3d random_rotation(Rng& rng);

/// Random symmetric positive definite 6x6 spring stiffness with translational
/// and rotational diagonal scales typical of the models in this library.
Matrix6d random_spring_stiffness(Rng& rng);

/// Random serial chain: leading rigid link, one actuated joint, one to three
/// six-dof springs separated by rigid links, zero to four passive rotational
/// dof. Geometry stays moderate so the kinetostatic systems remain well
/// conditioned.
ChainDescription random_chain(Rng& rng, const std::string& name);

/// Random posture for a chain: passive angles within +-0.5 rad, actuated
/// coordinate within +-50 mm/rad, spring coordinates within +-theta_scale.
ChainCoordinates random_posture(Rng& rng, const ChainDescription& chain,
                                double theta_scale = 0.0);

/// Independent reference solution of the unloaded kinetostatic problem:
/// minimize the spring energy 1/2 theta^T K_theta theta over (theta, dq)
/// subject to J_theta theta + J_q dq = dt, solved as one dense KKT system by
/// a complete orthogonal decomposition. The end-effector force is the
/// constraint multiplier. This path shares nothing with the saddle-system
/// solver it cross-checks.
struct ConstrainedLeastSquaresSolution {
    Vector6d f = Vector6d::Zero();
    Eigen::VectorXd theta;
    Eigen::VectorXd dq;
};
ConstrainedLeastSquaresSolution constrained_least_squares_response(
    const ChainDescription& chain, const ChainCoordinates& coords, const Vector6d& dt);

struct ValidationOptions {
    std::uint64_t seed = 0;
    int samples = 50;
    double fd_step = 1e-6;
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    double worst = 0.0;         // worst observed deviation, check-specific units
    double tolerance = 0.0;
    std::vector<std::uint64_t> failing_seeds;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
};

/// Runs the standard check suite over seeded random postures of the given
/// chains (zero spring coordinates, randomized actuated and passive ones):
/// finite-difference Jacobian agreement, unloaded symmetry and positive
/// semi-definiteness, the rank identity rank(K) = 6 - rank(J_q), and
/// agreement with the constrained least-squares reference. Failing sample
/// seeds are reported for reproduction.
ValidationReport validate_chains(
    const std::vector<const ChainDescription*>& chains,
    const ValidationOptions& options);

}  // namespace vjm
