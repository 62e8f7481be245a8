#include "support.hpp"

#include <cmclab/errors.hpp>
#include <cmclab/functionals.hpp>

#include <doctest.h>

using namespace cmclab;
using testing::kPi;

namespace {

SurfaceMesh perturbed(double amplitude, int subdiv = 3, std::uint64_t seed = 1)
{
    GeneratorSpec g;
    g.kind = GeneratorKind::PerturbedSphere;
    g.subdiv = subdiv;
    g.amplitude = amplitude;
    g.seed = seed;
    g.normalize_area = true;
    return generate(g);
}

double brute_diameter(const SurfaceMesh& m)
{
    double best = 0.0;
    for (std::size_t i = 0; i < m.num_vertices(); ++i) {
        for (std::size_t j = i + 1; j < m.num_vertices(); ++j) {
            best = std::max(best, (m.vertices().row(i) - m.vertices().row(j)).norm());
        }
    }
    return best;
}

} // namespace

TEST_CASE("J closed form matches the direct residual and is minimal")
{
    const SurfaceMesh m = perturbed(0.05);
    const CurvaturePacket p = compute_curvature(m);
    const JFunctional j = j_functional(m, p);
    const double direct = j_residual_direct(m, p, j.j_c);
    CHECK(j.j_value > 0.0);
    CHECK(std::abs(direct - j.j_value) < 1e-9 * (1.0 + direct));
    CHECK(j_residual_direct(m, p, j.j_c * 1.01) > direct);
    CHECK(j_residual_direct(m, p, j.j_c * 0.99) > direct);
}

TEST_CASE("J is translation invariant, the sphere residual is not")
{
    const SurfaceMesh m = make_icosphere(3);
    const SurfaceMesh moved = translate_mesh(m, Eigen::Vector3d(3, -1, 2));
    const CurvaturePacket p = compute_curvature(m);
    const CurvaturePacket pm = compute_curvature(moved);
    CHECK(std::abs(j_functional(moved, pm).j_value - j_functional(m, p).j_value) < 1e-10);
    CHECK(sphere_residual(m, p, 2.0) < 0.01);
    CHECK(sphere_residual(moved, pm, 2.0) > 10.0);
}

TEST_CASE("energy identities hold exactly")
{
    // int |A°|^2 = int |H|^2 / 2 - 2 pi chi * 2 and int |A|^2 = int |H|^2 - 4 pi chi.
    auto check = [](const SurfaceMesh& m) {
        const EnergyReport e = energy_report(m, compute_curvature(m));
        const double scale = std::max(std::abs(e.tracefree_energy), 0.5 * e.willmore_raw);
        CHECK(std::abs(e.tracefree_energy - (0.5 * e.willmore_raw - 4.0 * kPi * e.euler_char)) < 1e-9 * scale);
        CHECK(std::abs(e.total_curvature - (e.willmore_raw - 4.0 * kPi * e.euler_char)) < 1e-9 * scale);
        CHECK(e.willmore_quarter == doctest::Approx(0.25 * e.willmore_raw));
    };
    check(perturbed(0.08));
    check(generate(GeneratorSpec{.kind = GeneratorKind::TorusOfRevolution, .grid_u = 48, .grid_v = 24}));
    check(generate(GeneratorSpec{.kind = GeneratorKind::CliffordTorus, .grid_u = 32, .grid_v = 32}));
}

TEST_CASE("round sphere energy report")
{
    const SurfaceMesh m = make_icosphere(4);
    const EnergyReport e = energy_report(m, compute_curvature(m));
    CHECK(e.area == doctest::Approx(4.0 * kPi).epsilon(2e-3));
    CHECK(e.willmore_quarter == doctest::Approx(4.0 * kPi).epsilon(2e-3));
    REQUIRE(e.mean_scalar);
    CHECK(*e.mean_scalar == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(*e.deficit_l2 < 1e-3);
    CHECK(e.j_c == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(e.j_value < 1e-3);
    CHECK(e.euler_char == 2);
    CHECK(e.diameter == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("diameter pruning agrees with brute force")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SurfaceMesh m = perturbed(0.2, 2, seed);
        CHECK(diameter(m) == brute_diameter(m));
    }
    const SurfaceMesh ell = generate(GeneratorSpec{.kind = GeneratorKind::Ellipsoid, .subdiv = 2});
    CHECK(diameter(ell) == brute_diameter(ell));
    CHECK(diameter_bound_check(energy_report(ell, compute_curvature(ell))).holds);
}

TEST_CASE("c bounds")
{
    const SurfaceMesh m = make_icosphere(4);
    const EnergyReport e = energy_report(m, compute_curvature(m));
    const CBounds b = c_bounds_check(e, 0.05);
    CHECK(b.holds);
    CHECK(b.lower <= b.c * 1.02);
    CHECK(b.c <= b.upper * 1.02);
    CHECK_THROWS_AS(c_bounds_check(e, 1e-3), PreconditionUnmet);
}

TEST_CASE("alexandrov report")
{
    const SurfaceMesh m = make_icosphere(4);
    const CurvaturePacket p = compute_curvature(m);
    const AlexandrovReport a = alexandrov_report(m, p);
    CHECK_FALSE(a.flipped);
    CHECK(a.h0 == doctest::Approx(2.0).epsilon(3e-3));
    CHECK(a.delta2 < 3e-3);
    CHECK(a.rescale_factor == doctest::Approx(std::sqrt(4.0 * kPi / m.total_area())));

    const SurfaceMesh f = flip_orientation(m);
    const AlexandrovReport af = alexandrov_report(f, compute_curvature(f));
    CHECK(af.flipped);
    CHECK(af.h0 == doctest::Approx(a.h0).epsilon(1e-12));
    CHECK(af.delta2 == doctest::Approx(a.delta2).epsilon(1e-9));

    const SurfaceMesh torus4 = generate(GeneratorSpec{.kind = GeneratorKind::CliffordTorus, .grid_u = 8, .grid_v = 8});
    CHECK_THROWS_AS(alexandrov_report(torus4, compute_curvature(torus4)), CodimensionError);

    Positions q(3, 3);
    q << 0, 0, 0, 1, 0, 0, 0, 1, 0;
    const SurfaceMesh pillow(q, {{0, 1, 2}, {0, 2, 1}});
    CHECK_THROWS_AS(alexandrov_report(pillow, compute_curvature(pillow)), NegativeVolume);
}

TEST_CASE("rescaling lemma")
{
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const SurfaceMesh raw = perturbed(0.03, 3, seed);
        const AlexandrovReport a = alexandrov_report(raw, compute_curvature(raw));
        const SurfaceMesh m = scale_mesh(raw, a.h0 / 2.0);
        const double area = m.total_area();
        const RescalingCheck c = rescaling_lemma_check(m, area);
        CHECK(c.holds());
        CHECK(c.scaled_area == doctest::Approx(4.0 * kPi).epsilon(1e-9));
        CHECK_THROWS_AS(rescaling_lemma_check(m, 0.9 * area), PreconditionUnmet);
    }
    CHECK_THROWS_AS(rescaling_lemma_check(make_icosphere(3, 2.0), 100.0), PreconditionUnmet);
}

TEST_CASE("mean lower bound")
{
    CHECK(mean_lower_bound(0.0) == 2.0);
    CHECK(mean_lower_bound(1.0) == doctest::Approx(2.0 * std::sqrt(1.0 - 1.0 / (16.0 * kPi))));
    CHECK(mean_lower_bound(100.0) == 0.0);

    const SurfaceMesh m = perturbed(0.0, 4);
    const EnergyReport e = energy_report(m, compute_curvature(m));
    CHECK(mean_lower_bound_check(e, 0.1));
    const SurfaceMesh bumpy = perturbed(0.05, 3);
    CHECK_THROWS_AS(mean_lower_bound_check(energy_report(bumpy, compute_curvature(bumpy)), 1e-3), PreconditionUnmet);

    const SurfaceMesh big = make_icosphere(3, 2.0);
    CHECK_THROWS_AS(mean_lower_bound_check(energy_report(big, compute_curvature(big)), 0.1), PreconditionUnmet);
}

TEST_CASE("property: functionals are invariant under similarities")
{
    const SurfaceMesh base = perturbed(0.05, 2);
    const EnergyReport e0 = energy_report(base, compute_curvature(base));
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const double s = 0.5 + testing::random_vector(1, seed)[0] * testing::random_vector(1, seed)[0];
        const SurfaceMesh m = scale_mesh(
            rigid_transform(base, testing::random_rotation(3, seed), testing::random_vector(3, seed + 9, 4.0)), s);
        const EnergyReport e = energy_report(m, compute_curvature(m));
        CHECK(testing::rel_diff(e.willmore_raw, e0.willmore_raw) < 1e-11);
        CHECK(testing::rel_diff(e.tracefree_energy, e0.tracefree_energy) < 1e-9);
        CHECK(testing::rel_diff(e.j_c * s * s, e0.j_c) < 1e-11);
        CHECK(testing::rel_diff(e.j_value, e0.j_value) < 1e-7);
        CHECK(testing::rel_diff(e.diameter, s * e0.diameter) < 1e-12);
        CHECK(testing::rel_diff(*e.deficit_l2, *e0.deficit_l2) < 1e-7);
    }
}
