#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "vjm/jacobians.hpp"
#include "vjm/validation.hpp"

using namespace vjm;
using vjm::testing::max_abs_diff;
using vjm::testing::reference_chain;

namespace {

double jacobian_gap(const ChainJacobians& a, const ChainJacobians& b) {
    double err = 0.0;
    if (a.j_theta.cols() > 0) err = (a.j_theta - b.j_theta).cwiseAbs().maxCoeff();
    if (a.j_q.cols() > 0) err = std::max(err, (a.j_q - b.j_q).cwiseAbs().maxCoeff());
    return err;
}

}  // namespace

TEST_CASE("prismatic actuator column is the unit translation twist") {
    const ChainDescription chain(
        "prismatic", {ActuatedJoint{translation_along(Axis::X), 1.0e4}});
    const ChainJacobians jac = chain_jacobians(chain, chain.zero_coordinates());
    REQUIRE(jac.j_theta.cols() == 1);
    CHECK(jac.j_q.cols() == 0);
    Vector6d expected;
    expected << 1, 0, 0, 0, 0, 0;
    CHECK(max_abs_diff(jac.j_theta.col(0), expected) == 0.0);
}

TEST_CASE("revolute joint at the origin produces the classic twist column") {
    const Eigen::Vector3d p{40.0, -25.0, 60.0};
    const ChainDescription chain(
        "revolute", {PassiveR{rotation_about(Axis::Z)}, RigidLink{Transform::from_translation(p)}});
    const ChainJacobians jac = chain_jacobians(chain, chain.zero_coordinates());
    REQUIRE(jac.j_q.cols() == 1);
    Vector6d expected;
    expected << -p.y(), p.x(), 0, 0, 0, 1;
    CHECK(max_abs_diff(jac.j_q.col(0), expected) < 1e-12);

    const ChainJacobians fd = finite_difference_jacobians(chain, chain.zero_coordinates(), 1e-6);
    CHECK(jacobian_gap(jac, fd) < 1e-6);
}

TEST_CASE("trailing joints produce exact unit columns with no numerical fuzz") {
    const ChainDescription chain(
        "trailing", {RigidLink{Transform::from_translation({15.0, 0.0, 0.0})},
                     PassiveR{rotation_about(Axis::Z)}});
    const ChainJacobians jac = chain_jacobians(chain, chain.zero_coordinates());
    Vector6d expected;
    expected << 0, 0, 0, 0, 0, 1;  // rotation about the end point itself
    CHECK(max_abs_diff(jac.j_q.col(0), expected) == 0.0);
}

TEST_CASE("rigid-only chains yield empty jacobians") {
    const ChainDescription chain("rigid", {RigidLink{Transform::from_translation({1, 2, 3})}});
    const ChainJacobians jac = chain_jacobians(chain, chain.zero_coordinates());
    CHECK(jac.j_theta.cols() == 0);
    CHECK(jac.j_q.cols() == 0);
    const ChainJacobians fd = finite_difference_jacobians(chain, chain.zero_coordinates(), 1e-6);
    CHECK(fd.j_theta.cols() == 0);
    CHECK(fd.j_q.cols() == 0);
}

TEST_CASE("analytic and central-difference columns agree on the reference chain") {
    const ChainDescription chain = reference_chain();
    double worst = 0.0;
    for (int s = 0; s < 25; ++s) {
        Rng rng(100 + s);
        const ChainCoordinates posture = random_posture(rng, chain, 1e-3);
        const ChainJacobians analytic = chain_jacobians(chain, posture);
        const ChainJacobians fd = finite_difference_jacobians(chain, posture, 1e-6);
        worst = std::max(worst, jacobian_gap(analytic, fd));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("parallelogram coordinate accumulates both factor terms") {
    std::vector<ChainElement> elements;
    elements.push_back(RigidLink{Transform::from_translation({5.0, 1.0, -2.0})});
    elements.push_back(ParallelogramLink{rotation_about(Axis::Y), 310.0});
    elements.push_back(RigidLink{Transform::from_translation({12.0, 0.0, 4.0})});
    const ChainDescription chain("plg-jac", std::move(elements));

    for (const double q2 : {0.0, 0.35, -0.6}) {
        ChainCoordinates coords = chain.zero_coordinates();
        coords.q_passive(0) = q2;
        const ChainJacobians analytic = chain_jacobians(chain, coords);
        const ChainJacobians fd = finite_difference_jacobians(chain, coords, 1e-6);
        CHECK(jacobian_gap(analytic, fd) < 1e-6);
        // the segment never rotates the frames downstream of it
        CHECK(analytic.j_q.col(0).tail<3>().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("finite differences are step-stable in the truncation regime") {
    const ChainDescription chain = reference_chain();
    Rng rng(7);
    const ChainCoordinates posture = random_posture(rng, chain, 0.0);
    const ChainJacobians a5 = finite_difference_jacobians(chain, posture, 1e-5);
    const ChainJacobians a6 = finite_difference_jacobians(chain, posture, 1e-6);
    const ChainJacobians a7 = finite_difference_jacobians(chain, posture, 1e-7);
    CHECK(jacobian_gap(a5, a6) < 1e-6);
    CHECK(jacobian_gap(a6, a7) < 1e-5);
}

TEST_CASE("central differences converge quadratically against the analytic reference") {
    const ChainDescription chain = reference_chain();
    Rng rng(9);
    const ChainCoordinates posture = random_posture(rng, chain, 0.0);
    const ChainJacobians analytic = chain_jacobians(chain, posture);
    const double err4 = jacobian_gap(finite_difference_jacobians(chain, posture, 1e-4), analytic);
    const double err5 = jacobian_gap(finite_difference_jacobians(chain, posture, 1e-5), analytic);
    const double ratio = err4 / err5;
    CHECK(ratio > 20.0);   // ~100 expected, within a factor of 5
    CHECK(ratio < 500.0);
}

TEST_CASE("spring jacobian at zero theta depends only on the passive posture") {
    const ChainDescription chain = reference_chain();
    Rng rng(10);
    ChainCoordinates a = random_posture(rng, chain, 0.0);
    ChainCoordinates b = a;
    b.theta.setZero();  // identical posture, fresh vector
    CHECK(jacobian_gap(chain_jacobians(chain, a), chain_jacobians(chain, b)) == 0.0);
}

TEST_CASE("step must be positive") {
    const ChainDescription chain = reference_chain();
    CHECK_THROWS_AS(finite_difference_jacobians(chain, chain.zero_coordinates(), 0.0),
                    std::invalid_argument);
}
