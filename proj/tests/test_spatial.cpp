#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helpers.hpp"
#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"
#include "vjm/validation.hpp"

using namespace vjm;
using vjm::testing::matrix_exponential;
using vjm::testing::max_abs_diff;

namespace {

Transform random_transform(Rng& rng) {
    const Eigen::Vector3d p{rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0),
                            rng.uniform(-100.0, 100.0)};
    return Transform(random_rotation(rng), p);
}

}  // namespace

// ==========================================================
// Elementary transforms
// ==========================================================

TEST_CASE("zero rotation is the identity") {
    const Transform t = elementary_transform(rotation_about(Axis::Z), 0.0);
    CHECK(t.is_approx(Transform::identity(), 0.0));
}

TEST_CASE("pure translation places the offset on the right axis") {
    const Transform t = elementary_transform(translation_along(Axis::X), 5.0);
    CHECK(t.translation() == Eigen::Vector3d(5.0, 0.0, 0.0));
    CHECK(t.rotation() == Eigen::Matrix3d::Identity());
}

TEST_CASE("elementary rotation matches the matrix-exponential oracle") {
    const Transform t = elementary_transform(rotation_about(Axis::Y), 0.3);
    const Eigen::Matrix3d expected = matrix_exponential(skew({0.0, 0.3, 0.0}));
    CHECK(max_abs_diff(t.rotation(), expected) < 1e-12);

    // all axes, a few angles
    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        for (const double angle : {-1.2, -0.4, 0.7, 2.9}) {
            const Transform r = elementary_transform(rotation_about(axis), angle);
            const Eigen::Matrix3d ref = matrix_exponential(skew(axis_vector(axis) * angle));
            CHECK(max_abs_diff(r.rotation(), ref) < 1e-12);
        }
    }
}

TEST_CASE("non-finite elementary values are rejected") {
    CHECK_THROWS_AS(elementary_transform(rotation_about(Axis::X),
                                         std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(elementary_transform(translation_along(Axis::Y),
                                         std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

// ==========================================================
// Composition and inversion
// ==========================================================

TEST_CASE("identity is a two-sided unit of composition") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const Transform t = random_transform(rng);
        CHECK(t.is_approx(t * Transform::identity(), 1e-12));
        CHECK(t.is_approx(Transform::identity() * t, 1e-12));
    }
}

TEST_CASE("composition with the inverse gives the identity") {
    Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const Transform t = random_transform(rng);
        CHECK((t * t.inverse()).is_approx(Transform::identity(), 1e-12));
        CHECK((t.inverse() * t).is_approx(Transform::identity(), 1e-12));
    }
}

TEST_CASE("composition equals the explicit homogeneous matrix product") {
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Transform a = random_transform(rng);
        const Transform b = random_transform(rng);
        const Eigen::Matrix4d expected = a.matrix() * b.matrix();
        CHECK(max_abs_diff((a * b).matrix(), expected) < 1e-12);
    }
}

TEST_CASE("composition is associative") {
    Rng rng(14);
    for (int i = 0; i < 30; ++i) {
        const Transform a = random_transform(rng);
        const Transform b = random_transform(rng);
        const Transform c = random_transform(rng);
        CHECK(((a * b) * c).is_approx(a * (b * c), 1e-11));
    }
}

TEST_CASE("inverse of a pure translation flips the sign") {
    const Transform t = Transform::from_translation({3.0, 0.0, 0.0});
    CHECK(t.inverse().translation() == Eigen::Vector3d(-3.0, 0.0, 0.0));
    CHECK(Transform::identity().inverse().is_approx(Transform::identity(), 0.0));
}

TEST_CASE("inverse is the transpose-rotation form") {
    Rng rng(15);
    const Transform t = random_transform(rng);
    const Transform inv = t.inverse();
    CHECK(max_abs_diff(inv.rotation(), t.rotation().transpose()) == 0.0);
    CHECK(max_abs_diff(inv.translation(), -(t.rotation().transpose() * t.translation())) <
          1e-12);
}

TEST_CASE("rotation blocks stay orthonormal through factories and products") {
    Rng rng(16);
    for (int i = 0; i < 20; ++i) {
        const Transform t = random_transform(rng) * random_transform(rng);
        const Eigen::Matrix3d r = t.rotation();
        CHECK(max_abs_diff(r.transpose() * r, Eigen::Matrix3d::Identity()) < 1e-12);
        CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("constructor rejects a non-orthonormal rotation block") {
    Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
    bad(0, 1) = 0.01;
    CHECK_THROWS_AS(Transform(bad, Eigen::Vector3d::Zero()), ModelError);
}

TEST_CASE("nearest_rotation projects a noisy matrix back onto a rotation") {
    Rng rng(17);
    const Eigen::Matrix3d clean = random_rotation(rng);
    Eigen::Matrix3d noisy = clean;
    noisy(1, 2) += 3e-7;
    noisy(0, 0) -= 2e-7;
    const Eigen::Matrix3d r = nearest_rotation(noisy);
    CHECK(max_abs_diff(r.transpose() * r, Eigen::Matrix3d::Identity()) < 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
    CHECK(max_abs_diff(r, clean) < 1e-6);
}

// ==========================================================
// Small displacements
// ==========================================================

TEST_CASE("displacement between a pose and itself is zero") {
    Rng rng(18);
    const Transform t = random_transform(rng);
    const SmallDisplacement d = displacement_between(t, t);
    CHECK(d.dp.norm() == 0.0);
    CHECK(d.dphi.norm() < 1e-15);  // R R^T carries last-bit noise
}

TEST_CASE("pure small translation is recovered exactly") {
    const Transform moved = Transform::from_translation({1e-3, 0.0, 0.0});
    const SmallDisplacement d = displacement_between(Transform::identity(), moved);
    CHECK(d.dp == Eigen::Vector3d(1e-3, 0.0, 0.0));
    CHECK(d.dphi.norm() == 0.0);
}

TEST_CASE("small rotation about z is recovered to first order") {
    const Transform rot = Transform::rotation(Axis::Z, 1e-5);
    const SmallDisplacement d = displacement_between(Transform::identity(), rot);
    CHECK(max_abs_diff(d.dphi, Eigen::Vector3d(0.0, 0.0, std::sin(1e-5))) < 1e-15);
    CHECK((d.dphi - Eigen::Vector3d(0.0, 0.0, 1e-5)).norm() < 1e-12);
}

TEST_CASE("displacement ratio converges to the unit twist of every elementary axis") {
    Rng rng(19);
    const Transform base = random_transform(rng);
    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        for (const MotionKind kind : {MotionKind::Translation, MotionKind::Rotation}) {
            const ElementaryAxis ea{axis, kind};
            Vector6d unit = Vector6d::Zero();
            if (kind == MotionKind::Translation) {
                unit.head<3>() = base.rotation() * axis_vector(axis);
            } else {
                unit.tail<3>() = base.rotation() * axis_vector(axis);
            }
            const auto ratio_error = [&](double h) {
                const Transform moved = base * elementary_transform(ea, h);
                return (displacement_between(base, moved).vec() / h - unit).norm();
            };
            // first-order limit: all steps land near the unit twist, and the
            // rotation truncation term (~h^2/6) shrinks until roundoff
            for (const double h : {1e-3, 1e-4, 1e-5}) CHECK(ratio_error(h) < 1e-6);
            if (kind == MotionKind::Rotation) {
                CHECK(ratio_error(1e-3) / ratio_error(1e-5) > 10.0);
            }
        }
    }
}
