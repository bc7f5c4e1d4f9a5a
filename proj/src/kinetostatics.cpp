#include "vjm/kinetostatics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vjm/errors.hpp"

namespace vjm {

namespace {

/// S_theta assembled blockwise: scalar actuator springs contribute
/// j j^T / k, six-dof springs J_b K_b^-1 J_b^T. Only 6x6 inversions occur.
Matrix6d spring_compliance_at_end(const ChainJacobians& jac,
                                  const AggregateSpringStiffness& k_theta) {
    Matrix6d s = Matrix6d::Zero();
    for (const auto& block : k_theta.blocks()) {
        const int w = static_cast<int>(block.k.rows());
        const auto jb = jac.j_theta.middleCols(block.offset, w);
        if (w == 1) {
            s += jb * jb.transpose() / block.k(0, 0);
        } else {
            s += jb * block.k.inverse() * jb.transpose();
        }
    }
    return s;
}

Eigen::MatrixXd assemble_saddle(const Matrix6d& s_theta,
                                const Eigen::Matrix<double, 6, Eigen::Dynamic>& j_q,
                                const Eigen::MatrixXd& s_q) {
    const int nq = static_cast<int>(j_q.cols());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6 + nq, 6 + nq);
    a.topLeftCorner<6, 6>() = s_theta;
    if (nq > 0) {
        a.topRightCorner(6, nq) = j_q;
        a.bottomLeftCorner(nq, 6) = j_q.transpose();
        a.bottomRightCorner(nq, nq) = s_q;
    }
    return a;
}

/// Rank threshold for the saddle systems. The natural scale of a genuine
/// eigenvalue is the compliance magnitude on the diagonal, not the norm of
/// the (mixed-unit) Jacobian blocks, so the relative tolerance anchors to the
/// largest diagonal magnitude; a multiple of machine epsilon times the
/// spectral radius guards against decomposition noise on exact zeros.
double saddle_tolerance(const Eigen::MatrixXd& a, double spectral_max, double rel_tol) {
    const double diag_scale = a.diagonal().cwiseAbs().maxCoeff();
    return std::max(rel_tol * diag_scale,
                    64.0 * std::numeric_limits<double>::epsilon() * spectral_max);
}

/// Symmetric Ruiz equilibration: returns d with max-norm-balanced d.A.d rows.
/// The saddle systems mix mm, rad, N and N·mm scales; balancing them before a
/// decomposition keeps the effective condition number near the physical one.
Eigen::VectorXd equilibration_scaling(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd work = a;
    for (int iter = 0; iter < 3; ++iter) {
        for (int i = 0; i < n; ++i) {
            const double r = work.row(i).cwiseAbs().maxCoeff();
            if (r > 0.0) {
                const double s = 1.0 / std::sqrt(r);
                d(i) *= s;
            }
        }
        work = d.asDiagonal() * a * d.asDiagonal();
    }
    return d;
}

/// SVD-based pseudo-inverse for the (possibly non-symmetric) loaded system,
/// computed on the equilibrated matrix.
Eigen::MatrixXd svd_pseudo_inverse(const Eigen::MatrixXd& a, double rel_tol) {
    const Eigen::VectorXd d = equilibration_scaling(a);
    const Eigen::MatrixXd scaled = d.asDiagonal() * a * d.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = sv.size() > 0 ? saddle_tolerance(scaled, sv(0), rel_tol) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) inv(i) = 1.0 / sv(i);
    }
    return d.asDiagonal() *
           (svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose()).eval() *
           d.asDiagonal();
}

int rank_from_result(const Matrix6d& k) { return matrix_rank(k); }

}  // namespace

SpectralPseudoInverse symmetric_pseudo_inverse(const Eigen::MatrixXd& a, double rel_tol) {
    const Eigen::VectorXd d = equilibration_scaling(a);
    const Eigen::MatrixXd scaled = d.asDiagonal() * a * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
    const double tol = saddle_tolerance(scaled, scale, rel_tol);

    SpectralPseudoInverse out;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > tol) {
            inv(i) = 1.0 / ev(i);
            ++out.rank;
        }
    }
    out.pinv = d.asDiagonal() *
               (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose()).eval() *
               d.asDiagonal();
    return out;
}

int matrix_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double tol = rel_tol * sv(0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++r;
    }
    return r;
}

ChainStiffnessResult chain_stiffness_unloaded(const ChainDescription& chain,
                                              const ChainCoordinates& coords) {
    const ChainJacobians jac = chain_jacobians(chain, coords);
    const AggregateSpringStiffness k_theta = aggregate_spring_stiffness(chain);
    const Matrix6d s_theta = spring_compliance_at_end(jac, k_theta);

    ChainStiffnessResult res;
    res.passive_rank = matrix_rank(jac.j_q);
    if (s_theta.isZero(0.0)) {
        // nothing elastic anywhere: the chain transmits no force at all
        return res;
    }

    const Eigen::MatrixXd a = assemble_saddle(
        s_theta, jac.j_q, Eigen::MatrixXd::Zero(jac.j_q.cols(), jac.j_q.cols()));
    const SpectralPseudoInverse sp = symmetric_pseudo_inverse(a);

    res.k_chain = sp.pinv.topLeftCorner<6, 6>();
    res.rank = rank_from_result(res.k_chain);
    return res;
}

ChainResponse chain_response_unloaded(const ChainDescription& chain,
                                      const ChainCoordinates& coords, const Vector6d& dt) {
    const ChainJacobians jac = chain_jacobians(chain, coords);
    const AggregateSpringStiffness k_theta = aggregate_spring_stiffness(chain);
    const Matrix6d s_theta = spring_compliance_at_end(jac, k_theta);

    const int nq = static_cast<int>(jac.j_q.cols());
    const Eigen::MatrixXd a =
        assemble_saddle(s_theta, jac.j_q, Eigen::MatrixXd::Zero(nq, nq));
    const SpectralPseudoInverse sp = symmetric_pseudo_inverse(a);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6 + nq);
    rhs.head<6>() = dt;
    const Eigen::VectorXd sol = sp.pinv * rhs;

    ChainResponse out;
    out.f = sol.head<6>();
    out.dq = sol.tail(nq);
    return out;
}

ChainStiffnessResult chain_stiffness_loaded(const ChainDescription& chain,
                                            const ChainCoordinates& coords, const Wrench& f_ext,
                                            double fd_step) {
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    chain.check_coordinates(coords);
    const Vector6d f = f_ext.vec();
    const int nt = chain.theta_count();
    const int nq = chain.passive_count();

    // Central differences of the joint-reaction maps theta -> J_theta^T f and
    // q -> J_q^T f, one coordinate at a time.
    Eigen::MatrixXd d_theta = Eigen::MatrixXd::Zero(nt, nt);
    Eigen::MatrixXd s_q = Eigen::MatrixXd::Zero(nq, nq);
    {
        ChainCoordinates work = coords;
        for (int k = 0; k < nt; ++k) {
            const double saved = work.theta(k);
            work.theta(k) = saved + fd_step;
            const Eigen::VectorXd gp = chain_jacobians(chain, work).j_theta.transpose() * f;
            work.theta(k) = saved - fd_step;
            const Eigen::VectorXd gm = chain_jacobians(chain, work).j_theta.transpose() * f;
            work.theta(k) = saved;
            d_theta.col(k) = (gp - gm) / (2.0 * fd_step);
        }
        for (int k = 0; k < nq; ++k) {
            const double saved = work.q_passive(k);
            work.q_passive(k) = saved + fd_step;
            const Eigen::VectorXd gp = chain_jacobians(chain, work).j_q.transpose() * f;
            work.q_passive(k) = saved - fd_step;
            const Eigen::VectorXd gm = chain_jacobians(chain, work).j_q.transpose() * f;
            work.q_passive(k) = saved;
            s_q.col(k) = (gp - gm) / (2.0 * fd_step);
        }
    }

    // With exactly zero derivative corrections the loaded system is the
    // unloaded one; solve it through the same blockwise route so the
    // degeneration is exact.
    if (d_theta.isZero(0.0) && s_q.isZero(0.0)) {
        return chain_stiffness_unloaded(chain, coords);
    }

    const ChainJacobians jac = chain_jacobians(chain, coords);
    const AggregateSpringStiffness k_theta = aggregate_spring_stiffness(chain);
    const Eigen::MatrixXd k_mod = k_theta.dense() - d_theta;

    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (k_mod + k_mod.transpose()), Eigen::EigenvaluesOnly);
        const double min_ev = es.eigenvalues().minCoeff();
        if (min_ev <= 0.0) {
            std::ostringstream os;
            os << "load-modified spring stiffness of chain '" << chain.name()
               << "' lost positive definiteness (min eigenvalue " << min_ev << ")";
            throw NumericalError(os.str());
        }
    }

    const Matrix6d s_theta =
        jac.j_theta * k_mod.partialPivLu().solve(jac.j_theta.transpose());
    const Eigen::MatrixXd a = assemble_saddle(s_theta, jac.j_q, s_q);
    const Eigen::MatrixXd pinv = svd_pseudo_inverse(a, 1e-10);

    ChainStiffnessResult res;
    res.k_chain = pinv.topLeftCorner<6, 6>();
    res.rank = rank_from_result(res.k_chain);
    res.passive_rank = matrix_rank(jac.j_q);
    return res;
}

ManipulatorStiffness manipulator_stiffness(
    const std::vector<std::pair<const ChainDescription*, const ChainCoordinates*>>& chains,
    const std::optional<Wrench>& load, double fd_step) {
    if (chains.empty()) {
        throw std::invalid_argument("manipulator stiffness needs at least one chain");
    }

    // All chains must close on one end-effector pose.
    const Transform ref = forward_transform(*chains[0].first, *chains[0].second);
    for (std::size_t i = 1; i < chains.size(); ++i) {
        const Transform t = forward_transform(*chains[i].first, *chains[i].second);
        const double dp = (t.translation() - ref.translation()).cwiseAbs().maxCoeff();
        const double dr = axial(t.rotation() * ref.rotation().transpose()).cwiseAbs().maxCoeff();
        if (dp > 1e-6 || dr > 1e-8) {
            std::ostringstream os;
            os << "chain '" << chains[i].first->name() << "' does not close on the pose of '"
               << chains[0].first->name() << "' (translation gap " << dp << " mm, rotation gap "
               << dr << " rad)";
            throw ConsistencyError(os.str());
        }
    }

    ManipulatorStiffness ms;
    ms.per_chain.reserve(chains.size());
    for (const auto& [chain, coords] : chains) {
        ms.per_chain.push_back(chain_stiffness_unloaded(*chain, *coords));
    }

    if (load.has_value() && !load->is_zero()) {
        Matrix6d k_unloaded = Matrix6d::Zero();
        for (const ChainStiffnessResult& r : ms.per_chain) k_unloaded += r.k_chain;
        // First-order load split across chains sharing the end-effector motion.
        const Matrix6d k_pinv = symmetric_pseudo_inverse(k_unloaded).pinv;
        const Vector6d dt = k_pinv * load->vec();
        for (std::size_t i = 0; i < chains.size(); ++i) {
            const Wrench share = Wrench::from_vec(ms.per_chain[i].k_chain * dt);
            ms.per_chain[i] =
                chain_stiffness_loaded(*chains[i].first, *chains[i].second, share, fd_step);
        }
    }

    ms.k_total.setZero();
    for (const ChainStiffnessResult& r : ms.per_chain) ms.k_total += r.k_chain;
    return ms;
}

SmallDisplacement deflection_under_load(const ManipulatorStiffness& ms, const Wrench& w) {
    const Matrix6d k = 0.5 * (ms.k_total + ms.k_total.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(k);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double tol = 1e-10 * ev.cwiseAbs().maxCoeff();

    int rank = 0;
    for (int i = 0; i < 6; ++i) {
        if (std::abs(ev(i)) > tol) ++rank;
    }
    if (rank < 6) {
        std::ostringstream os;
        os << "manipulator stiffness is singular (rank " << rank << "); null-space basis:";
        for (int i = 0; i < 6; ++i) {
            if (std::abs(ev(i)) <= tol) {
                os << " [" << es.eigenvectors().col(i).transpose() << "]";
            }
        }
        throw NumericalError(os.str());
    }

    Vector6d dt = Vector6d::Zero();
    for (int i = 0; i < 6; ++i) {
        dt += es.eigenvectors().col(i) * (es.eigenvectors().col(i).dot(w.vec()) / ev(i));
    }
    return SmallDisplacement::from_vec(dt);
}

StiffnessIndices stiffness_indices(const Matrix6d& k_total) {
    const Eigen::Matrix3d kt = k_total.topLeftCorner<3, 3>();
    const Eigen::Matrix3d kr = k_total.bottomRightCorner<3, 3>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> et(0.5 * (kt + kt.transpose()),
                                                      Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> er(0.5 * (kr + kr.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return {et.eigenvalues().minCoeff(), er.eigenvalues().minCoeff()};
}

StiffnessIndices stiffness_indices(const ManipulatorStiffness& ms) {
    return stiffness_indices(ms.k_total);
}

}  // namespace vjm
