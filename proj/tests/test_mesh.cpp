#include "support.hpp"

#include <cmclab/errors.hpp>
#include <cmclab/mesh.hpp>

#include <doctest.h>

using namespace cmclab;
using testing::kPi;

TEST_CASE("tetrahedron diagnostics")
{
    const SurfaceMesh m = testing::tetrahedron();
    const MeshDiagnostics d = validate(m);
    CHECK(d.is_closed);
    CHECK(d.is_manifold);
    CHECK(d.is_oriented);
    CHECK(d.euler_characteristic == 2);
    CHECK(d.num_edges == 6);
    CHECK(d.num_components == 1);
    REQUIRE(d.genus);
    CHECK(*d.genus == 0);
    CHECK(d.ok());
    CHECK(unique_edges(m).size() == 6);
}

TEST_CASE("tetrahedron measures")
{
    const SurfaceMesh m = testing::tetrahedron();
    CHECK(signed_volume(m) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(m.total_area() == doctest::Approx(1.5 + std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(signed_volume(flip_orientation(m)) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("triangle area in any dimension")
{
    Eigen::VectorXd a = Eigen::VectorXd::Zero(5), b = a, c = a;
    b[3] = 2.0;
    c[4] = 3.0;
    CHECK(triangle_area(a, b, c) == doctest::Approx(3.0));
}

TEST_CASE("open, non-manifold and misoriented meshes")
{
    Positions p(5, 3);
    p << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1;

    const SurfaceMesh open(p, {{0, 1, 2}});
    CHECK_FALSE(validate(open).is_closed);
    CHECK_FALSE(validate(open).genus.has_value());
    CHECK_THROWS_AS(require_valid(open), TopologyError);

    const SurfaceMesh fan(p, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}});
    CHECK_FALSE(validate(fan).is_manifold);
    CHECK_THROWS_AS(require_valid(fan), TopologyError);

    const SurfaceMesh bad(p, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 3, 2}});
    CHECK_FALSE(validate(bad).is_oriented);
    CHECK_THROWS_AS(require_valid(bad), TopologyError);
}

TEST_CASE("degenerate triangles are counted")
{
    Positions p(4, 3);
    p << 0, 0, 0, 1, 0, 0, 2, 0, 0, 0, 1, 0;
    const SurfaceMesh m(p, {{0, 1, 2}, {0, 3, 1}});
    const MeshDiagnostics d = validate(m);
    CHECK(d.degenerate_triangles == 1);
    CHECK(d.min_triangle_area == 0.0);
}

TEST_CASE("constructor errors")
{
    Positions p2(3, 2);
    p2.setZero();
    CHECK_THROWS_AS(SurfaceMesh(p2, {{0, 1, 2}}), DimensionError);

    Positions p(3, 3);
    p.setIdentity();
    CHECK_THROWS_AS(SurfaceMesh(p, {{0, 1, 3}}), TopologyError);
    CHECK_THROWS_AS(SurfaceMesh(p, {{0, 1, 1}}), TopologyError);
    p(0, 0) = std::nan("");
    CHECK_THROWS_AS(SurfaceMesh(p, {{0, 1, 2}}), DimensionError);
}

TEST_CASE("transform errors")
{
    const SurfaceMesh m = testing::tetrahedron();
    Eigen::MatrixXd shear = Eigen::MatrixXd::Identity(3, 3);
    shear(0, 1) = 0.1;
    CHECK_THROWS_AS(rigid_transform(m, shear, Eigen::VectorXd::Zero(3)), NotOrthogonal);
    CHECK_THROWS_AS(rigid_transform(m, Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4)), DimensionError);
    CHECK_THROWS_AS(scale_mesh(m, 0.0), NonPositiveFactor);
    CHECK_THROWS_AS(scale_mesh(m, -2.0), NonPositiveFactor);
    CHECK_THROWS_AS(translate_mesh(m, Eigen::VectorXd::Zero(4)), DimensionError);

    GeneratorSpec g;
    g.kind = GeneratorKind::CliffordTorus;
    g.grid_u = g.grid_v = 8;
    CHECK_THROWS_AS(signed_volume(generate(g)), CodimensionError);
}

TEST_CASE("disjoint union")
{
    const SurfaceMesh a = testing::tetrahedron();
    const SurfaceMesh b = translate_mesh(testing::octahedron(), Eigen::Vector3d(5, 0, 0));
    const SurfaceMesh u = disjoint_union(a, b);
    const MeshDiagnostics d = validate(u);
    CHECK(d.num_components == 2);
    CHECK(d.euler_characteristic == 4);
    REQUIRE(d.genus);
    CHECK(*d.genus == 0);
    CHECK(u.total_area() == doctest::Approx(a.total_area() + b.total_area()));
}

TEST_CASE("torus genus")
{
    GeneratorSpec g;
    g.kind = GeneratorKind::TorusOfRevolution;
    g.grid_u = 24;
    g.grid_v = 12;
    const MeshDiagnostics d = validate(generate(g));
    CHECK(d.euler_characteristic == 0);
    REQUIRE(d.genus);
    CHECK(*d.genus == 1);
}

TEST_CASE("property: area and volume covariance under similarities")
{
    const SurfaceMesh m = make_icosphere(2);
    const double a0 = m.total_area();
    const double v0 = signed_volume(m);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Eigen::MatrixXd r = testing::random_rotation(3, seed);
        const Eigen::VectorXd t = testing::random_vector(3, seed + 100, 10.0);
        const double s = 0.1 + 3.0 * testing::random_vector(1, seed + 200)[0] * testing::random_vector(1, seed + 200)[0];
        const SurfaceMesh moved = scale_mesh(rigid_transform(m, r, t), s);
        CHECK(testing::rel_diff(moved.total_area(), s * s * a0) < 1e-12);
        CHECK(testing::rel_diff(signed_volume(moved), s * s * s * v0) < 1e-11);
        CHECK(validate(moved).euler_characteristic == 2);
    }
}

TEST_CASE("property: rigid motions in R^n preserve area")
{
    GeneratorSpec g;
    g.kind = GeneratorKind::CliffordTorus;
    g.grid_u = g.grid_v = 16;
    const SurfaceMesh m = generate(g);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SurfaceMesh moved =
            rigid_transform(m, testing::random_rotation(4, seed), testing::random_vector(4, seed + 7, 3.0));
        CHECK(testing::rel_diff(moved.total_area(), m.total_area()) < 1e-12);
    }
}
