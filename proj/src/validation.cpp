#include "vjm/validation.hpp"

#include <cmath>

#include "vjm/jacobians.hpp"

namespace vjm {

std::uint64_t Rng::next_u64() {
    // splitmix64: tiny, seedable, identical everywhere.
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

Eigen::Matrix3d random_rotation(Rng& rng) {
    // Uniform axis, uniform angle; fine for test coverage purposes.
    Eigen::Vector3d axis;
    do {
        axis = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    } while (axis.norm() < 1e-3);
    axis.normalize();
    const double angle = rng.uniform(-std::acos(-1.0), std::acos(-1.0));
    const Eigen::Matrix3d s = skew(axis);
    return Eigen::Matrix3d::Identity() + std::sin(angle) * s +
           (1.0 - std::cos(angle)) * s * s;
}

Matrix6d random_spring_stiffness(Rng& rng) {
    // Diagonal scales typical of machine links (N/mm, N·mm/rad), mild random
    // coupling, guaranteed positive definite by construction.
    Vector6d diag;
    for (int i = 0; i < 3; ++i) diag(i) = rng.uniform(1e3, 1e5);
    for (int i = 3; i < 6; ++i) diag(i) = rng.uniform(1e6, 1e8);

    Matrix6d q = Matrix6d::Identity();
    // A handful of random Givens-like mixings keeps conditioning moderate.
    for (int k = 0; k < 6; ++k) {
        const int i = rng.uniform_int(0, 5);
        const int j = rng.uniform_int(0, 5);
        if (i == j) continue;
        const double a = rng.uniform(-0.3, 0.3);
        Matrix6d g = Matrix6d::Identity();
        g(i, i) = g(j, j) = std::cos(a);
        g(i, j) = -std::sin(a);
        g(j, i) = std::sin(a);
        q = g * q;
    }
    return q * diag.asDiagonal() * q.transpose();
}

namespace {

Transform random_link(Rng& rng) {
    const Eigen::Vector3d p{rng.uniform(-150.0, 150.0), rng.uniform(-150.0, 150.0),
                            rng.uniform(-150.0, 150.0)};
    return Transform(nearest_rotation(random_rotation(rng)), p);
}

ElementaryAxis random_rotation_axis(Rng& rng) {
    return rotation_about(static_cast<Axis>(rng.uniform_int(0, 2)));
}

}  // namespace

ChainDescription random_chain(Rng& rng, const std::string& name) {
    std::vector<ChainElement> elements;
    elements.push_back(RigidLink{random_link(rng)});

    const bool prismatic = rng.uniform01() < 0.5;
    elements.push_back(ActuatedJoint{
        {static_cast<Axis>(rng.uniform_int(0, 2)),
         prismatic ? MotionKind::Translation : MotionKind::Rotation},
        rng.uniform(1e3, 1e5)});

    const int n_springs = rng.uniform_int(1, 3);
    int passive_left = rng.uniform_int(0, 4);
    for (int s = 0; s < n_springs; ++s) {
        elements.push_back(RigidLink{random_link(rng)});
        elements.push_back(Spring6{random_spring_stiffness(rng)});
        while (passive_left > 0 && (s + 1 == n_springs || rng.uniform01() < 0.5)) {
            if (passive_left >= 2 && rng.uniform01() < 0.5) {
                const ElementaryAxis first = random_rotation_axis(rng);
                ElementaryAxis second = random_rotation_axis(rng);
                while (second.axis == first.axis) second = random_rotation_axis(rng);
                elements.push_back(PassiveU{first, second});
                passive_left -= 2;
            } else {
                elements.push_back(PassiveR{random_rotation_axis(rng)});
                passive_left -= 1;
            }
            elements.push_back(RigidLink{random_link(rng)});
            if (s + 1 < n_springs) break;
        }
    }
    elements.push_back(RigidLink{random_link(rng)});
    return ChainDescription(name, std::move(elements));
}

ChainCoordinates random_posture(Rng& rng, const ChainDescription& chain, double theta_scale) {
    ChainCoordinates c = chain.zero_coordinates();
    c.q_act = rng.uniform(-50.0, 50.0);
    for (int i = 0; i < c.q_passive.size(); ++i) c.q_passive(i) = rng.uniform(-0.5, 0.5);
    for (int i = 0; i < c.theta.size(); ++i) c.theta(i) = rng.uniform(-theta_scale, theta_scale);
    return c;
}

ConstrainedLeastSquaresSolution constrained_least_squares_response(
    const ChainDescription& chain, const ChainCoordinates& coords, const Vector6d& dt) {
    const ChainJacobians jac = chain_jacobians(chain, coords);
    const Eigen::MatrixXd k_theta = aggregate_spring_stiffness(chain).dense();
    const int nt = chain.theta_count();
    const int nq = chain.passive_count();
    const int n = nt + nq;

    // Null-space elimination of: min 1/2 theta^T K theta over x = (theta, dq)
    // subject to C x = dt with C = [J_theta, J_q]. The one-shot KKT system is
    // numerically hopeless in these mixed units (stiffness entries near 1e8
    // against Schur values near 1e-8), so eliminate the constraint with an
    // orthogonal basis instead.
    Eigen::MatrixXd c(6, n);
    c.leftCols(nt) = jac.j_theta;
    c.rightCols(nq) = jac.j_q;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double sv_tol = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > sv_tol) ++rank;
    }

    // Minimum-norm particular solution of C x = dt.
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < rank; ++i) {
        x0 += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(dt) / sv(i));
    }

    Eigen::VectorXd x = x0;
    const int null_dim = n - rank;
    if (null_dim > 0) {
        const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(null_dim);
        const Eigen::MatrixXd h_null = k_theta * null_basis.topRows(nt);
        const Eigen::MatrixXd reduced = null_basis.topRows(nt).transpose() * h_null;
        const Eigen::VectorXd rhs = -h_null.transpose() * x0.head(nt);
        x += null_basis * reduced.completeOrthogonalDecomposition().solve(rhs);
    }

    ConstrainedLeastSquaresSolution out;
    out.theta = x.head(nt);
    out.dq = x.tail(nq);
    // Stationarity K theta = J_theta^T f recovers the end-effector force.
    if (nt > 0) {
        out.f = jac.j_theta.transpose().colPivHouseholderQr().solve(k_theta * out.theta);
    }
    return out;
}

ValidationReport validate_chains(const std::vector<const ChainDescription*>& chains,
                                 const ValidationOptions& options) {
    ValidationCheck fd{"jacobian-vs-central-fd", true, 0.0, 1e-6, {}};
    ValidationCheck sym{"unloaded-symmetry", true, 0.0, 1e-8, {}};
    ValidationCheck psd{"unloaded-positive-semidefinite", true, 0.0, 1e-8, {}};
    ValidationCheck rank{"rank-identity", true, 0.0, 0.0, {}};
    ValidationCheck oracle{"constrained-least-squares-agreement", true, 0.0, 1e-7, {}};

    for (int s = 0; s < options.samples; ++s) {
        const std::uint64_t sample_seed = options.seed * 1000003ull + static_cast<std::uint64_t>(s);
        Rng rng(sample_seed);
        for (const ChainDescription* chain : chains) {
            const ChainCoordinates posture = random_posture(rng, *chain, 0.0);

            const ChainJacobians analytic = chain_jacobians(*chain, posture);
            const ChainJacobians numeric =
                finite_difference_jacobians(*chain, posture, options.fd_step);
            double err = 0.0;
            if (analytic.j_theta.cols() > 0) {
                err = (analytic.j_theta - numeric.j_theta).cwiseAbs().maxCoeff();
            }
            if (analytic.j_q.cols() > 0) {
                err = std::max(err, (analytic.j_q - numeric.j_q).cwiseAbs().maxCoeff());
            }
            fd.worst = std::max(fd.worst, err);
            if (err > fd.tolerance) {
                fd.passed = false;
                fd.failing_seeds.push_back(sample_seed);
            }

            const ChainStiffnessResult res = chain_stiffness_unloaded(*chain, posture);
            const double k_scale = res.k_chain.cwiseAbs().maxCoeff();
            const double asym =
                (res.k_chain - res.k_chain.transpose()).cwiseAbs().maxCoeff() / k_scale;
            sym.worst = std::max(sym.worst, asym);
            if (asym > sym.tolerance) {
                sym.passed = false;
                sym.failing_seeds.push_back(sample_seed);
            }

            Eigen::SelfAdjointEigenSolver<Matrix6d> es(
                0.5 * (res.k_chain + res.k_chain.transpose()), Eigen::EigenvaluesOnly);
            const double min_rel = -es.eigenvalues().minCoeff() / k_scale;
            psd.worst = std::max(psd.worst, min_rel);
            if (min_rel > psd.tolerance) {
                psd.passed = false;
                psd.failing_seeds.push_back(sample_seed);
            }

            const int defect = std::abs(res.rank - (6 - res.passive_rank));
            rank.worst = std::max(rank.worst, static_cast<double>(defect));
            if (defect != 0) {
                rank.passed = false;
                rank.failing_seeds.push_back(sample_seed);
            }

            Vector6d dt;
            dt << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3);
            const ConstrainedLeastSquaresSolution ref =
                constrained_least_squares_response(*chain, posture, dt);
            const ChainResponse got = chain_response_unloaded(*chain, posture, dt);
            const double f_scale = std::max(ref.f.norm(), 1e-30);
            double dev = (got.f - ref.f).norm() / f_scale;
            if (ref.dq.size() > 0) {
                const double q_scale = std::max(ref.dq.norm(), 1e-30);
                dev = std::max(dev, (got.dq - ref.dq).norm() / q_scale);
            }
            oracle.worst = std::max(oracle.worst, dev);
            if (dev > oracle.tolerance) {
                oracle.passed = false;
                oracle.failing_seeds.push_back(sample_seed);
            }
        }
    }

    ValidationReport report;
    report.checks = {fd, sym, psd, rank, oracle};
    return report;
}

}  // namespace vjm
