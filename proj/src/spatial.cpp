#include "vjm/spatial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vjm/errors.hpp"

namespace vjm {

namespace {

constexpr double kRotationTolerance = 1e-9;

void check_rotation(const Eigen::Matrix3d& r) {
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    const double det_err = std::abs(r.determinant() - 1.0);
    if (ortho > kRotationTolerance || det_err > kRotationTolerance) {
        std::ostringstream os;
        os << "invalid rotation block: |R^T R - I|_max = " << ortho
           << ", |det - 1| = " << det_err;
        throw ModelError(os.str());
    }
}

}  // namespace

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        default: return "z";
    }
}

Eigen::Vector3d axis_vector(Axis a) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    v(static_cast<int>(a)) = 1.0;
    return v;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d s;
    // clang-format off
    s <<     0.0, -v.z(),  v.y(),
           v.z(),    0.0, -v.x(),
          -v.y(),  v.x(),    0.0;
    // clang-format on
    return s;
}

Eigen::Vector3d axial(const Eigen::Matrix3d& m) {
    return {0.5 * (m(2, 1) - m(1, 2)),
            0.5 * (m(0, 2) - m(2, 0)),
            0.5 * (m(1, 0) - m(0, 1))};
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

Transform::Transform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rot_(rotation), trans_(translation) {
    check_rotation(rot_);
}

Transform Transform::from_translation(const Eigen::Vector3d& p) {
    return Transform(unchecked_t{}, Eigen::Matrix3d::Identity(), p);
}

Transform Transform::rotation(Axis axis, double angle_rad) {
    return elementary_transform(rotation_about(axis), angle_rad);
}

Transform Transform::translation(Axis axis, double distance_mm) {
    return elementary_transform(translation_along(axis), distance_mm);
}

Transform Transform::from_matrix(const Eigen::Matrix4d& m) {
    if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-12) {
        throw ModelError("homogeneous matrix bottom row is not (0 0 0 1)");
    }
    return Transform(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Eigen::Matrix4d Transform::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rot_;
    m.topRightCorner<3, 1>() = trans_;
    return m;
}

Transform Transform::operator*(const Transform& rhs) const {
    return Transform(unchecked_t{}, rot_ * rhs.rot_, rot_ * rhs.trans_ + trans_);
}

Transform Transform::inverse() const {
    return Transform(unchecked_t{}, rot_.transpose(), -(rot_.transpose() * trans_));
}

bool Transform::is_approx(const Transform& other, double tol) const {
    return (rot_ - other.rot_).cwiseAbs().maxCoeff() <= tol &&
           (trans_ - other.trans_).cwiseAbs().maxCoeff() <= tol;
}

Transform elementary_transform(const ElementaryAxis& axis_kind, double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("elementary transform value must be finite");
    }
    if (axis_kind.kind == MotionKind::Translation) {
        return Transform::from_translation(axis_vector(axis_kind.axis) * value);
    }
    const double c = std::cos(value);
    const double s = std::sin(value);
    Eigen::Matrix3d r;
    switch (axis_kind.axis) {
        case Axis::X:
            r << 1, 0, 0,
                 0, c, -s,
                 0, s, c;
            break;
        case Axis::Y:
            r << c, 0, s,
                 0, 1, 0,
                 -s, 0, c;
            break;
        default:
            r << c, -s, 0,
                 s, c, 0,
                 0, 0, 1;
            break;
    }
    return Transform(r, Eigen::Vector3d::Zero());
}

Eigen::Matrix4d motion_generator(const ElementaryAxis& axis_kind) {
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    if (axis_kind.kind == MotionKind::Translation) {
        g.topRightCorner<3, 1>() = axis_vector(axis_kind.axis);
    } else {
        g.topLeftCorner<3, 3>() = skew(axis_vector(axis_kind.axis));
    }
    return g;
}

SmallDisplacement displacement_between(const Transform& nominal, const Transform& perturbed) {
    SmallDisplacement d;
    d.dp = perturbed.translation() - nominal.translation();
    d.dphi = axial(perturbed.rotation() * nominal.rotation().transpose());
    return d;
}

}  // namespace vjm
