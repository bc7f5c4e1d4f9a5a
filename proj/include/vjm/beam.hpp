#pragma once

#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vjm/spatial.hpp"

namespace vjm {

/// Cross-sections for the analytic beam model. Width lies along the local y
/// axis, height along local z; the beam itself runs along local x.
struct RectangleSection {
    double width = 0.0;   // mm, along y
    double height = 0.0;  // mm, along z
};

struct CircleSection {
    double diameter = 0.0;  // mm
};

using Section = std::variant<RectangleSection, CircleSection>;

/// Straight prismatic beam along its local x axis.
struct BeamSpec {
    double length = 0.0;           // mm
    double elastic_modulus = 0.0;  // N/mm^2
    double shear_modulus = 0.0;    // N/mm^2
    Section section;
};

/// Area and second moments in mm^2 / mm^4. The rectangle torsion constant
/// uses the single-term approximation
///   J_t = a b^3 (1/3 - 0.21 (b/a) (1 - b^4 / (12 a^4))),  a >= b,
/// so external references can match to full precision.
struct SectionProperties {
    double area = 0.0;
    double i_y = 0.0;  // bending about y (deflection along z)
    double i_z = 0.0;  // bending about z (deflection along y)
    double j_t = 0.0;  // torsion
};

/// Throws std::invalid_argument on non-positive dimensions.
SectionProperties section_properties(const Section& section);

enum class ComplianceSource { AnalyticBeam, BeamChain, External };

/// 6x6 symmetric positive definite compliance of a link, loads and
/// deflections at the link free end in the link local frame. Row/column
/// order: translations x, y, z then rotations x, y, z
/// (mm/N, mm/(N·mm), rad/N, rad/(N·mm) blocks).
struct LinkCompliance {
    Matrix6d c = Matrix6d::Zero();
    ComplianceSource source = ComplianceSource::AnalyticBeam;

    Matrix6d stiffness() const { return c.inverse(); }
};

/// Cantilever compliance of an Euler-Bernoulli beam at its free end:
/// axial L/(EA), torsion L/(G J_t), bending L^3/(3 E I) with the
/// translation-rotation coupling L^2/(2 E I) and rotation L/(E I) per
/// bending plane. Shear deformation is not modeled.
LinkCompliance beam_compliance(const BeamSpec& spec);

/// Compliance of a serial run of beams. Each pair is (beam, offset): the
/// offset places the beam root relative to the previous tip, the beam body
/// extends along the local x axis, and a six-dof spring with the beam's
/// stiffness acts at its tip. The result is J_b K_b^-1 J_b^T of that
/// spring-only chain, expressed at the final tip.
LinkCompliance chain_link_compliances(const std::vector<std::pair<BeamSpec, Transform>>& beams);

/// Ingestion gate for externally computed (e.g. FEA) compliance matrices:
/// requires symmetry within 1e-6 relative and a positive definite symmetric
/// part; the accepted matrix is symmetrized and tagged External.
LinkCompliance load_external_compliance(const Matrix6d& c);

}  // namespace vjm
