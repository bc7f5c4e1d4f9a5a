#pragma once

#include <Eigen/Dense>

namespace vjm {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Units used throughout the library: mm, N, rad, N·mm.

enum class Axis { X = 0, Y = 1, Z = 2 };
enum class MotionKind { Translation, Rotation };

/// One elementary motion: a translation along or a rotation about a
/// coordinate axis of the current frame.
struct ElementaryAxis {
    Axis axis = Axis::X;
    MotionKind kind = MotionKind::Translation;
};

constexpr ElementaryAxis translation_along(Axis a) { return {a, MotionKind::Translation}; }
constexpr ElementaryAxis rotation_about(Axis a) { return {a, MotionKind::Rotation}; }

const char* axis_name(Axis a);

/// Unit vector of a coordinate axis.
Eigen::Vector3d axis_vector(Axis a);

/// Skew-symmetric cross-product matrix: skew(v) * u = v x u.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// Axial vector of the skew-symmetric part of m.
Eigen::Vector3d axial(const Eigen::Matrix3d& m);

/// Nearest rotation matrix in the Frobenius sense (polar projection via SVD).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

/// Rigid-body transform with an orthonormal rotation block and a translation
/// in mm. The checked constructor rejects rotation blocks that are not
/// orthonormal with det +1; composition assumes valid inputs and never
/// re-normalizes (drift over realistic chain lengths stays below 1e-12 and is
/// asserted in tests).
class Transform {
public:
    Transform() : rot_(Eigen::Matrix3d::Identity()), trans_(Eigen::Vector3d::Zero()) {}

    /// Checked construction; throws ModelError if the rotation block is invalid.
    Transform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

    static Transform identity() { return Transform{}; }
    static Transform from_translation(const Eigen::Vector3d& p);
    static Transform rotation(Axis axis, double angle_rad);
    static Transform translation(Axis axis, double distance_mm);
    /// Checked construction from a homogeneous 4x4 matrix (bottom row must be 0 0 0 1).
    static Transform from_matrix(const Eigen::Matrix4d& m);

    const Eigen::Matrix3d& rotation() const noexcept { return rot_; }
    const Eigen::Vector3d& translation() const noexcept { return trans_; }

    Eigen::Matrix4d matrix() const;

    Transform operator*(const Transform& rhs) const;
    Transform inverse() const;

    /// Entrywise comparison of rotation and translation blocks.
    bool is_approx(const Transform& other, double tol) const;

private:
    struct unchecked_t {};
    Transform(unchecked_t, const Eigen::Matrix3d& r, const Eigen::Vector3d& p)
        : rot_(r), trans_(p) {}

    Eigen::Matrix3d rot_;
    Eigen::Vector3d trans_;
};

/// First-order pose difference: dp in mm, dphi in rad. Valid only as an
/// infinitesimal quantity; do not compose two of these as finite motions.
struct SmallDisplacement {
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    Eigen::Vector3d dphi = Eigen::Vector3d::Zero();

    Vector6d vec() const {
        Vector6d v;
        v << dp, dphi;
        return v;
    }
    static SmallDisplacement from_vec(const Vector6d& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// Canonical rotation-about-axis or translation-along-axis transform.
/// Throws std::invalid_argument for non-finite values.
Transform elementary_transform(const ElementaryAxis& axis_kind, double value);

/// Generator of an elementary motion: d/dc V(c) = g * V(c) as 4x4 matrices.
Eigen::Matrix4d motion_generator(const ElementaryAxis& axis_kind);

/// First-order displacement taking `nominal` to `perturbed`:
/// dp is the translation difference, dphi the axial vector of the
/// skew-symmetric part of R_perturbed * R_nominal^T - I. The caller owns the
/// small-motion precondition (relative rotation well under ~0.1 rad).
SmallDisplacement displacement_between(const Transform& nominal, const Transform& perturbed);

}  // namespace vjm
