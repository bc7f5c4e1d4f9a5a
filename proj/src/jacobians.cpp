#include "vjm/jacobians.hpp"

#include <stdexcept>
#include <vector>

namespace vjm {

ChainJacobians chain_jacobians(const ChainDescription& chain, const ChainCoordinates& coords) {
    chain.check_coordinates(coords);
    const std::vector<detail::Factor> factors = detail::factor_sequence(chain);
    const int n = static_cast<int>(factors.size());

    std::vector<Transform> value(n);
    for (int i = 0; i < n; ++i) value[i] = detail::factor_transform(factors[i], coords);

    // prefix[i] = product of factors [0, i); right[i] = product of factors [i, n).
    std::vector<Transform> prefix(n + 1);
    std::vector<Transform> right(n + 1);
    prefix[0] = Transform::identity();
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * value[i];
    right[n] = Transform::identity();
    for (int i = n - 1; i >= 0; --i) right[i] = value[i] * right[i + 1];

    const Eigen::Matrix3d r_total_t = prefix[n].rotation().transpose();

    ChainJacobians jac;
    jac.j_theta.setZero(6, chain.theta_count());
    jac.j_q.setZero(6, chain.passive_count());

    for (int i = 0; i < n; ++i) {
        const detail::Factor& f = factors[i];
        if (f.constant || f.binding == detail::Factor::Binding::None) continue;

        const Eigen::Matrix4d dt =
            prefix[i].matrix() * motion_generator(f.axis) * right[i].matrix();

        Vector6d col;
        col.head<3>() = dt.topRightCorner<3, 1>();
        col.tail<3>() = axial(dt.topLeftCorner<3, 3>() * r_total_t);
        col *= f.sign;

        if (f.binding == detail::Factor::Binding::Passive) {
            jac.j_q.col(f.index) += col;
        } else {
            jac.j_theta.col(f.index) += col;
        }
    }
    return jac;
}

ChainJacobians finite_difference_jacobians(const ChainDescription& chain,
                                           const ChainCoordinates& coords, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    chain.check_coordinates(coords);

    const Transform base = forward_transform(chain, coords);
    const auto column = [&](ChainCoordinates& work, double& slot) {
        const double saved = slot;
        slot = saved + step;
        const SmallDisplacement plus = displacement_between(base, forward_transform(chain, work));
        slot = saved - step;
        const SmallDisplacement minus = displacement_between(base, forward_transform(chain, work));
        slot = saved;
        return ((plus.vec() - minus.vec()) / (2.0 * step)).eval();
    };

    ChainJacobians jac;
    jac.j_theta.setZero(6, chain.theta_count());
    jac.j_q.setZero(6, chain.passive_count());

    ChainCoordinates work = coords;
    for (int k = 0; k < chain.theta_count(); ++k) {
        jac.j_theta.col(k) = column(work, work.theta(k));
    }
    for (int k = 0; k < chain.passive_count(); ++k) {
        jac.j_q.col(k) = column(work, work.q_passive(k));
    }
    return jac;
}

}  // namespace vjm
