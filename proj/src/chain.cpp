#include "vjm/chain.hpp"

#include <cmath>
#include <sstream>

#include "vjm/errors.hpp"

namespace vjm {

namespace {

constexpr double kSpringSymmetryTol = 1e-9;  // relative

const char* element_kind_name(const ChainElement& e) {
    switch (e.index()) {
        case 0: return "RigidLink";
        case 1: return "ActuatedJoint";
        case 2: return "Spring6";
        case 3: return "PassiveU";
        case 4: return "PassiveR";
        default: return "ParallelogramLink";
    }
}

[[noreturn]] void element_error(const std::string& chain, std::size_t idx,
                                const ChainElement& e, const std::string& reason) {
    std::ostringstream os;
    os << "chain '" << chain << "' element " << idx << " (" << element_kind_name(e)
       << "): " << reason;
    throw ModelError(os.str());
}

void check_spring6(const std::string& chain, std::size_t idx, const ChainElement& e,
                   const Matrix6d& k) {
    const double scale = k.cwiseAbs().maxCoeff();
    const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || asym > kSpringSymmetryTol * scale) {
        std::ostringstream os;
        os << "spring stiffness not symmetric (max asymmetry " << asym << ", scale " << scale
           << ")";
        element_error(chain, idx, e, os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(0.5 * (k + k.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "spring stiffness not positive definite (min eigenvalue "
           << es.eigenvalues().minCoeff() << ")";
        element_error(chain, idx, e, os.str());
    }
}

void check_rotation_axis(const std::string& chain, std::size_t idx, const ChainElement& e,
                         const ElementaryAxis& a, const char* which) {
    if (a.kind != MotionKind::Rotation) {
        element_error(chain, idx, e, std::string(which) + " must be a rotation axis");
    }
}

}  // namespace

ChainDescription::ChainDescription(std::string name, std::vector<ChainElement> elements)
    : name_(std::move(name)), elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const ChainElement& e = elements_[i];
        if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
            if (!(act->k_act > 0.0) || !std::isfinite(act->k_act)) {
                element_error(name_, i, e, "actuator stiffness must be positive and finite");
            }
            if (n_actuated_ == 1) {
                element_error(name_, i, e, "chain already has an actuated joint");
            }
            ++n_actuated_;
            ++n_theta_;
        } else if (const auto* spring = std::get_if<Spring6>(&e)) {
            check_spring6(name_, i, e, spring->stiffness);
            n_theta_ += 6;
        } else if (const auto* u = std::get_if<PassiveU>(&e)) {
            check_rotation_axis(name_, i, e, u->axis_first, "first axis");
            check_rotation_axis(name_, i, e, u->axis_second, "second axis");
            if (u->axis_first.axis == u->axis_second.axis) {
                element_error(name_, i, e, "universal joint axes must be distinct");
            }
            n_passive_ += 2;
        } else if (const auto* r = std::get_if<PassiveR>(&e)) {
            check_rotation_axis(name_, i, e, r->axis, "axis");
            n_passive_ += 1;
        } else if (const auto* plg = std::get_if<ParallelogramLink>(&e)) {
            check_rotation_axis(name_, i, e, plg->axis, "axis");
            if (!(plg->length > 0.0) || !std::isfinite(plg->length)) {
                element_error(name_, i, e, "length must be positive and finite");
            }
            n_passive_ += 1;
        }
    }
}

ChainCoordinates ChainDescription::zero_coordinates() const {
    ChainCoordinates c;
    c.q_act = 0.0;
    c.q_passive = Eigen::VectorXd::Zero(n_passive_);
    c.theta = Eigen::VectorXd::Zero(n_theta_);
    return c;
}

void ChainDescription::check_coordinates(const ChainCoordinates& coords) const {
    if (coords.q_passive.size() != n_passive_ || coords.theta.size() != n_theta_) {
        std::ostringstream os;
        os << "coordinate size mismatch for chain '" << name_ << "': expected " << n_passive_
           << " passive and " << n_theta_ << " spring coordinates, got "
           << coords.q_passive.size() << " and " << coords.theta.size();
        throw std::invalid_argument(os.str());
    }
}

AggregateSpringStiffness::AggregateSpringStiffness(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
    for (const Block& b : blocks_) size_ += static_cast<int>(b.k.rows());
}

Eigen::MatrixXd AggregateSpringStiffness::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_, size_);
    for (const Block& b : blocks_) {
        m.block(b.offset, b.offset, b.k.rows(), b.k.cols()) = b.k;
    }
    return m;
}

Eigen::MatrixXd AggregateSpringStiffness::dense_inverse() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_, size_);
    for (const Block& b : blocks_) {
        if (b.k.rows() == 1) {
            m(b.offset, b.offset) = 1.0 / b.k(0, 0);
        } else {
            m.block(b.offset, b.offset, b.k.rows(), b.k.cols()) = b.k.inverse();
        }
    }
    return m;
}

namespace detail {

std::vector<Factor> factor_sequence(const ChainDescription& chain) {
    std::vector<Factor> factors;
    int theta_index = 0;
    int passive_index = 0;
    for (const ChainElement& e : chain.elements()) {
        if (const auto* link = std::get_if<RigidLink>(&e)) {
            Factor f;
            f.constant = true;
            f.fixed = link->t;
            factors.push_back(f);
        } else if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
            Factor f;
            f.axis = act->axis_kind;
            f.binding = Factor::Binding::ActuatedPlusTheta;
            f.index = theta_index++;
            factors.push_back(f);
        } else if (std::get_if<Spring6>(&e)) {
            // Three translations then three rotations, axes X, Y, Z.
            for (int k = 0; k < 6; ++k) {
                Factor f;
                f.axis.axis = static_cast<Axis>(k % 3);
                f.axis.kind = k < 3 ? MotionKind::Translation : MotionKind::Rotation;
                f.binding = Factor::Binding::Theta;
                f.index = theta_index++;
                factors.push_back(f);
            }
        } else if (const auto* u = std::get_if<PassiveU>(&e)) {
            for (const ElementaryAxis& a : {u->axis_first, u->axis_second}) {
                Factor f;
                f.axis = a;
                f.binding = Factor::Binding::Passive;
                f.index = passive_index++;
                factors.push_back(f);
            }
        } else if (const auto* r = std::get_if<PassiveR>(&e)) {
            Factor f;
            f.axis = r->axis;
            f.binding = Factor::Binding::Passive;
            f.index = passive_index++;
            factors.push_back(f);
        } else if (const auto* plg = std::get_if<ParallelogramLink>(&e)) {
            // R(+q) * T_x(L) * R(-q): both rotations share one coordinate.
            Factor fwd;
            fwd.axis = plg->axis;
            fwd.binding = Factor::Binding::Passive;
            fwd.index = passive_index;
            factors.push_back(fwd);

            Factor body;
            body.constant = true;
            body.fixed = Transform::translation(Axis::X, plg->length);
            factors.push_back(body);

            Factor back = fwd;
            back.sign = -1.0;
            factors.push_back(back);
            ++passive_index;
        }
    }
    return factors;
}

double factor_value(const Factor& f, const ChainCoordinates& coords) {
    switch (f.binding) {
        case Factor::Binding::ActuatedPlusTheta:
            return coords.q_act + coords.theta(f.index);
        case Factor::Binding::Theta:
            return coords.theta(f.index);
        case Factor::Binding::Passive:
            return f.sign * coords.q_passive(f.index);
        default:
            return 0.0;
    }
}

Transform factor_transform(const Factor& f, const ChainCoordinates& coords) {
    if (f.constant) return f.fixed;
    return elementary_transform(f.axis, factor_value(f, coords));
}

}  // namespace detail

Transform forward_transform(const ChainDescription& chain, const ChainCoordinates& coords) {
    chain.check_coordinates(coords);
    Transform t;
    for (const detail::Factor& f : detail::factor_sequence(chain)) {
        t = t * detail::factor_transform(f, coords);
    }
    return t;
}

AggregateSpringStiffness aggregate_spring_stiffness(const ChainDescription& chain) {
    std::vector<AggregateSpringStiffness::Block> blocks;
    int offset = 0;
    for (const ChainElement& e : chain.elements()) {
        if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
            AggregateSpringStiffness::Block b;
            b.offset = offset;
            b.k = Eigen::MatrixXd::Constant(1, 1, act->k_act);
            blocks.push_back(std::move(b));
            offset += 1;
        } else if (const auto* spring = std::get_if<Spring6>(&e)) {
            AggregateSpringStiffness::Block b;
            b.offset = offset;
            b.k = spring->stiffness;
            blocks.push_back(std::move(b));
            offset += 6;
        }
    }
    return AggregateSpringStiffness(std::move(blocks));
}

}  // namespace vjm
