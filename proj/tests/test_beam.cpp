#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "vjm/beam.hpp"
#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"
#include "vjm/validation.hpp"

using namespace vjm;
using vjm::testing::max_abs_diff;
using vjm::testing::rel_diff;

namespace {

// Unit-load (virtual work) integration oracle: internal force fields of unit
// tip loads, integrated with a 5-point Gauss rule (exact for these
// polynomial integrands).
Matrix6d unit_load_compliance(const BeamSpec& spec) {
    const SectionProperties sp = section_properties(spec.section);
    const double l = spec.length;
    const double ea = spec.elastic_modulus * sp.area;
    const double gj = spec.shear_modulus * sp.j_t;
    const double ei_y = spec.elastic_modulus * sp.i_y;
    const double ei_z = spec.elastic_modulus * sp.i_z;

    // internal fields at section x for unit load i: axial, torque, My, Mz
    const auto fields = [&](int i, double x) {
        std::array<double, 4> f{0.0, 0.0, 0.0, 0.0};
        switch (i) {
            case 0: f[0] = 1.0; break;                 // Fx
            case 1: f[3] = l - x; break;               // Fy bends about z
            case 2: f[2] = -(l - x); break;            // Fz bends about y
            case 3: f[1] = 1.0; break;                 // Mx
            case 4: f[2] = 1.0; break;                 // My
            default: f[3] = 1.0; break;                // Mz
        }
        return f;
    };

    static const std::array<double, 5> nodes = {
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    static const std::array<double, 5> weights = {
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
        0.2369268850561891};

    Matrix6d c = Matrix6d::Zero();
    for (int g = 0; g < 5; ++g) {
        const double x = 0.5 * l * (nodes[static_cast<std::size_t>(g)] + 1.0);
        const double w = 0.5 * l * weights[static_cast<std::size_t>(g)];
        for (int i = 0; i < 6; ++i) {
            const auto fi = fields(i, x);
            for (int j = i; j < 6; ++j) {
                const auto fj = fields(j, x);
                const double de = fi[0] * fj[0] / ea + fi[1] * fj[1] / gj +
                                  fi[2] * fj[2] / ei_y + fi[3] * fj[3] / ei_z;
                c(i, j) += w * de;
            }
        }
    }
    return c.selfadjointView<Eigen::Upper>();
}

/// Map a compliance acting at a frame (r, p) to the chain tip at p_end,
/// classic flexibility superposition.
Matrix6d transport_compliance(const Matrix6d& c_local, const Eigen::Matrix3d& r,
                              const Eigen::Vector3d& p, const Eigen::Vector3d& p_end) {
    Matrix6d rot = Matrix6d::Zero();
    rot.topLeftCorner<3, 3>() = r;
    rot.bottomRightCorner<3, 3>() = r;
    const Matrix6d c_global = rot * c_local * rot.transpose();
    Matrix6d lever = Matrix6d::Identity();
    lever.topRightCorner<3, 3>() = -skew(p_end - p);
    return lever * c_global * lever.transpose();
}

const BeamSpec kBeam{200.0, 2.1e5, 8.0e4, RectangleSection{20.0, 30.0}};

}  // namespace

// ==========================================================
// Section properties
// ==========================================================

TEST_CASE("rectangle and circle properties follow the closed forms") {
    const SectionProperties r = section_properties(RectangleSection{20.0, 30.0});
    CHECK(r.area == 600.0);
    CHECK(r.i_z == doctest::Approx(30.0 * 8000.0 / 12.0));
    CHECK(r.i_y == doctest::Approx(20.0 * 27000.0 / 12.0));
    const double a = 30.0, b = 20.0;
    CHECK(r.j_t == doctest::Approx(a * b * b * b *
                                   (1.0 / 3.0 - 0.21 * (b / a) * (1.0 - std::pow(b / a, 4) / 12.0))));

    const SectionProperties c = section_properties(CircleSection{24.0});
    CHECK(c.area == doctest::Approx(std::numbers::pi * 144.0));
    CHECK(c.i_y == doctest::Approx(std::numbers::pi * std::pow(24.0, 4) / 64.0));
    CHECK(c.j_t == doctest::Approx(2.0 * c.i_y));
}

TEST_CASE("degenerate sections are invalid arguments") {
    CHECK_THROWS_AS(section_properties(RectangleSection{0.0, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS(section_properties(CircleSection{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(beam_compliance({0.0, 2.1e5, 8.0e4, CircleSection{10.0}}),
                    std::invalid_argument);
}

// ==========================================================
// Cantilever compliance
// ==========================================================

TEST_CASE("tip deflection under a transverse force is L^3/(3EI)") {
    const LinkCompliance lc = beam_compliance(kBeam);
    const SectionProperties sp = section_properties(kBeam.section);
    const double expected = std::pow(kBeam.length, 3) / (3.0 * kBeam.elastic_modulus * sp.i_z);
    CHECK(std::abs(lc.c(1, 1) - expected) < 1e-10 * expected);

    const Matrix6d oracle = unit_load_compliance(kBeam);
    CHECK(std::abs(oracle(1, 1) - expected) < 1e-10 * expected);
}

TEST_CASE("the full matrix matches the unit-load integration oracle") {
    for (const BeamSpec& spec :
         {kBeam, BeamSpec{310.0, 2.1e5, 8.0e4, RectangleSection{16.0, 16.0}},
          BeamSpec{120.0, 7.0e4, 2.6e4, CircleSection{18.0}}}) {
        const LinkCompliance lc = beam_compliance(spec);
        CHECK(rel_diff(unit_load_compliance(spec), lc.c) < 1e-12);
    }
}

TEST_CASE("doubling the rectangle width halves the axial compliance") {
    BeamSpec wide = kBeam;
    std::get<RectangleSection>(wide.section).width *= 2.0;
    CHECK(beam_compliance(wide).c(0, 0) == doctest::Approx(0.5 * beam_compliance(kBeam).c(0, 0)));
}

TEST_CASE("random beams give symmetric positive definite compliance") {
    for (int s = 0; s < 20; ++s) {
        Rng rng(900 + s);
        BeamSpec spec;
        spec.length = rng.uniform(50.0, 500.0);
        spec.elastic_modulus = rng.uniform(5e4, 3e5);
        spec.shear_modulus = rng.uniform(2e4, 1e5);
        if (rng.uniform01() < 0.5) {
            spec.section = RectangleSection{rng.uniform(5.0, 60.0), rng.uniform(5.0, 60.0)};
        } else {
            spec.section = CircleSection{rng.uniform(5.0, 60.0)};
        }
        const LinkCompliance lc = beam_compliance(spec);
        CHECK(max_abs_diff(lc.c, lc.c.transpose()) == 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix6d> es(lc.c, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("compliance scales linearly for axial and torsion, cubically for bending") {
    const auto entry = [&](double length, int i, int j) {
        BeamSpec spec = kBeam;
        spec.length = length;
        return beam_compliance(spec).c(i, j);
    };
    for (const auto [i, j, exponent] : std::vector<std::array<int, 3>>{
             {0, 0, 1}, {3, 3, 1}, {1, 1, 3}, {2, 2, 3}}) {
        const double e1 = std::log(entry(200.0, i, j) / entry(100.0, i, j)) / std::log(2.0);
        const double e2 = std::log(entry(400.0, i, j) / entry(200.0, i, j)) / std::log(2.0);
        CHECK(std::abs(e1 - exponent) < 0.01);
        CHECK(std::abs(e2 - exponent) < 0.01);
    }
}

// ==========================================================
// Serial chains of beams
// ==========================================================

TEST_CASE("a single beam chained with identity offset is the plain beam") {
    const LinkCompliance direct = beam_compliance(kBeam);
    const LinkCompliance chained = chain_link_compliances({{kBeam, Transform::identity()}});
    CHECK(rel_diff(direct.c, chained.c) < 1e-12);
    CHECK(chained.source == ComplianceSource::BeamChain);
}

TEST_CASE("two half-beams reproduce the full beam") {
    BeamSpec half = kBeam;
    half.length = 0.5 * kBeam.length;
    const LinkCompliance full = beam_compliance(kBeam);
    const LinkCompliance chained = chain_link_compliances(
        {{half, Transform::identity()}, {half, Transform::identity()}});
    CHECK(rel_diff(full.c, chained.c) < 1e-9);
}

TEST_CASE("an L-shaped pair matches the flexibility superposition oracle") {
    BeamSpec second = kBeam;
    second.length = 140.0;
    const Transform elbow = Transform::rotation(Axis::Z, std::numbers::pi / 2.0);
    const LinkCompliance chained =
        chain_link_compliances({{kBeam, Transform::identity()}, {second, elbow}});

    // member 1 along x ending at (L1,0,0); member 2 along y ending at the tip
    const Eigen::Vector3d tip1{kBeam.length, 0.0, 0.0};
    const Eigen::Vector3d tip2 = tip1 + Eigen::Vector3d{0.0, second.length, 0.0};
    const Eigen::Matrix3d r2 = Transform::rotation(Axis::Z, std::numbers::pi / 2.0).rotation();
    const Matrix6d oracle =
        transport_compliance(beam_compliance(kBeam).c, Eigen::Matrix3d::Identity(), tip1, tip2) +
        transport_compliance(beam_compliance(second).c, r2, tip2, tip2);
    CHECK(rel_diff(oracle, chained.c) < 1e-9);
}

TEST_CASE("chaining is associative") {
    BeamSpec b1 = kBeam;
    BeamSpec b2{150.0, 2.1e5, 8.0e4, RectangleSection{14.0, 22.0}};
    BeamSpec b3{90.0, 2.1e5, 8.0e4, CircleSection{16.0}};
    const Transform t2 = Transform::rotation(Axis::Y, 0.4);
    const Transform t3 = Transform::rotation(Axis::Z, -0.7);

    const LinkCompliance all =
        chain_link_compliances({{b1, Transform::identity()}, {b2, t2}, {b3, t3}});

    // combine the first pair, then transport and add the third member
    const LinkCompliance first_two =
        chain_link_compliances({{b1, Transform::identity()}, {b2, t2}});
    const Transform end2 = Transform::translation(Axis::X, b1.length) * t2 *
                           Transform::translation(Axis::X, b2.length);
    const Transform end3 = end2 * t3 * Transform::translation(Axis::X, b3.length);
    const Matrix6d oracle =
        transport_compliance(first_two.c, Eigen::Matrix3d::Identity(), end2.translation(),
                             end3.translation()) +
        transport_compliance(beam_compliance(b3).c, (end2 * t3).rotation(), end3.translation(),
                             end3.translation());
    CHECK(rel_diff(oracle, all.c) < 1e-9);
}

TEST_CASE("an empty beam list is rejected") {
    CHECK_THROWS_AS(chain_link_compliances({}), std::invalid_argument);
}

// ==========================================================
// External compliance ingestion
// ==========================================================

TEST_CASE("a clean external matrix is accepted unchanged") {
    const Matrix6d c = 1e-4 * Matrix6d::Identity();
    const LinkCompliance lc = load_external_compliance(c);
    CHECK(max_abs_diff(lc.c, c) == 0.0);
    CHECK(lc.source == ComplianceSource::External);
}

TEST_CASE("tiny asymmetry is symmetrized away") {
    Matrix6d c = 1e-4 * Matrix6d::Identity();
    c(0, 1) = 1e-11;  // 1e-7 relative
    const LinkCompliance lc = load_external_compliance(c);
    CHECK(lc.c(0, 1) == lc.c(1, 0));
    CHECK(lc.c(0, 1) == doctest::Approx(0.5e-11));
}

TEST_CASE("gross asymmetry and indefiniteness are rejected with diagnostics") {
    Matrix6d skewed = 1e-4 * Matrix6d::Identity();
    skewed(0, 1) = 1e-8;  // 1e-4 relative
    CHECK_THROWS_AS(load_external_compliance(skewed), ModelError);

    Matrix6d indefinite = 1e-4 * Matrix6d::Identity();
    indefinite(5, 5) = -1e-4;
    try {
        load_external_compliance(indefinite);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }
}
