#include "vjm/beam.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "vjm/chain.hpp"
#include "vjm/errors.hpp"
#include "vjm/jacobians.hpp"

namespace vjm {

SectionProperties section_properties(const Section& section) {
    SectionProperties p;
    if (const auto* rect = std::get_if<RectangleSection>(&section)) {
        if (!(rect->width > 0.0) || !(rect->height > 0.0)) {
            throw std::invalid_argument("rectangle section dimensions must be positive");
        }
        const double w = rect->width;
        const double h = rect->height;
        p.area = w * h;
        p.i_z = h * w * w * w / 12.0;
        p.i_y = w * h * h * h / 12.0;
        const double a = std::max(w, h);
        const double b = std::min(w, h);
        p.j_t = a * b * b * b *
                (1.0 / 3.0 - 0.21 * (b / a) * (1.0 - std::pow(b / a, 4) / 12.0));
    } else {
        const auto& circ = std::get<CircleSection>(section);
        if (!(circ.diameter > 0.0)) {
            throw std::invalid_argument("circle section diameter must be positive");
        }
        const double d = circ.diameter;
        p.area = std::numbers::pi * d * d / 4.0;
        p.i_y = p.i_z = std::numbers::pi * std::pow(d, 4) / 64.0;
        p.j_t = std::numbers::pi * std::pow(d, 4) / 32.0;
    }
    return p;
}

LinkCompliance beam_compliance(const BeamSpec& spec) {
    if (!(spec.length > 0.0) || !(spec.elastic_modulus > 0.0) || !(spec.shear_modulus > 0.0)) {
        throw std::invalid_argument("beam length and moduli must be positive");
    }
    const SectionProperties sp = section_properties(spec.section);
    const double l = spec.length;
    const double e = spec.elastic_modulus;
    const double g = spec.shear_modulus;

    Matrix6d c = Matrix6d::Zero();
    c(0, 0) = l / (e * sp.area);
    c(3, 3) = l / (g * sp.j_t);

    // Bending in the x-y plane (force along y, moment about z).
    c(1, 1) = l * l * l / (3.0 * e * sp.i_z);
    c(1, 5) = c(5, 1) = l * l / (2.0 * e * sp.i_z);
    c(5, 5) = l / (e * sp.i_z);

    // Bending in the x-z plane (force along z, moment about y); the coupling
    // carries the opposite sign in a right-handed frame.
    c(2, 2) = l * l * l / (3.0 * e * sp.i_y);
    c(2, 4) = c(4, 2) = -l * l / (2.0 * e * sp.i_y);
    c(4, 4) = l / (e * sp.i_y);

    return {c, ComplianceSource::AnalyticBeam};
}

LinkCompliance chain_link_compliances(
    const std::vector<std::pair<BeamSpec, Transform>>& beams) {
    if (beams.empty()) {
        throw std::invalid_argument("beam chain needs at least one beam");
    }

    std::vector<Matrix6d> compliances;
    std::vector<ChainElement> elements;
    compliances.reserve(beams.size());
    for (const auto& [spec, offset] : beams) {
        const LinkCompliance lc = beam_compliance(spec);
        compliances.push_back(lc.c);
        elements.push_back(RigidLink{offset * Transform::translation(Axis::X, spec.length)});
        elements.push_back(Spring6{lc.stiffness()});
    }
    const ChainDescription chain("beam-chain", std::move(elements));
    const ChainJacobians jac = chain_jacobians(chain, chain.zero_coordinates());

    Matrix6d c = Matrix6d::Zero();
    for (std::size_t k = 0; k < compliances.size(); ++k) {
        const auto jb = jac.j_theta.middleCols(static_cast<int>(6 * k), 6);
        c += jb * compliances[k] * jb.transpose();
    }
    return {c, ComplianceSource::BeamChain};
}

LinkCompliance load_external_compliance(const Matrix6d& c) {
    const double scale = c.cwiseAbs().maxCoeff();
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || asym > 1e-6 * scale) {
        std::ostringstream os;
        os << "external compliance rejected: asymmetry " << asym << " exceeds 1e-6 relative to "
           << scale;
        throw ModelError(os.str());
    }
    const Matrix6d sym = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "external compliance rejected: not positive definite, eigenvalues ["
           << es.eigenvalues().transpose() << "]";
        throw ModelError(os.str());
    }
    return {sym, ComplianceSource::External};
}

}  // namespace vjm
