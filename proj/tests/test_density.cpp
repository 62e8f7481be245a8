#include "support.hpp"

#include <cmclab/clip.hpp>
#include <cmclab/density.hpp>
#include <cmclab/errors.hpp>

#include <doctest.h>

using namespace cmclab;
using testing::kPi;

TEST_CASE("mass and complement partition the area")
{
    const SurfaceMesh m = make_icosphere(3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::VectorXd c = testing::random_vector(3, seed, 1.2);
        const double r = 0.1 + testing::random_vector(1, seed + 40)[0] + 1.0;
        CHECK(ball_mass(m, c, r) + ball_mass_complement(m, c, r) == doctest::Approx(m.total_area()).epsilon(1e-13));
    }
    CHECK(ball_mass(m, Eigen::Vector3d::Zero(), 1.01) == doctest::Approx(m.total_area()).epsilon(1e-14));
    CHECK(ball_mass(m, Eigen::Vector3d(5, 0, 0), 1.0) == 0.0);
}

TEST_CASE("ball integrator agrees with per-triangle clipping")
{
    GeneratorSpec g;
    g.kind = GeneratorKind::PerturbedSphere;
    g.subdiv = 3;
    g.amplitude = 0.1;
    const SurfaceMesh m = generate(g);
    const BallIntegrator balls(m);
    CHECK(balls.num_triangles() == m.num_triangles());
    CHECK(balls.total_area() == doctest::Approx(m.total_area()));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::VectorXd c = m.vertex(seed * 37 % m.num_vertices());
        const auto prof = balls.profile(c);
        for (double r : {0.01, 0.05, 0.2, 0.7, 1.5, 3.0}) {
            double direct = 0.0;
            for (std::size_t t = 0; t < m.num_triangles(); ++t) {
                const auto& tri = m.triangles()[t];
                direct += triangle_ball_area(m.vertex(tri[0]), m.vertex(tri[1]), m.vertex(tri[2]), c, r);
            }
            CHECK(balls.mass(c, r) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(prof(r) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(balls.clipped_areas(c, r).sum() == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("density tends to one on a smooth sphere")
{
    const SurfaceMesh m = make_icosphere(5);
    const DensityProfile p = density_profile(m, 0, {0.2, 0.05, 0.1});
    CHECK(p.radii == std::vector<double>{0.05, 0.1, 0.2});
    // A unit sphere has mu(B_r) = pi r^2 exactly for r <= 2.
    for (double t : p.ratios) CHECK(t == doctest::Approx(1.0).epsilon(3e-3));
    CHECK(density_ratio(m, m.vertex(7), 1.0) == doctest::Approx(1.0).epsilon(3e-3));
    CHECK_THROWS_AS(density_profile(m, -1, {0.1}), BadSample);
    CHECK_THROWS_AS(density_profile(m, static_cast<int>(m.num_vertices()), {0.1}), BadSample);
}

TEST_CASE("property: mass is nondecreasing in r")
{
    const SurfaceMesh m = generate(GeneratorSpec{.kind = GeneratorKind::BubblingPair, .subdiv = 2, .neck_radius = 0.2});
    const BallIntegrator balls(m);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::VectorXd c = testing::random_vector(3, seed, 1.0);
        const auto prof = balls.profile(c);
        double prev = 0.0;
        for (double r : geometric_grid(1e-3, 5.0, 80)) {
            const double mass = prof(r);
            CHECK(mass >= prev - 1e-14);
            prev = mass;
        }
        CHECK(prev == doctest::Approx(m.total_area()).epsilon(1e-13));
    }
}

TEST_CASE("vertex density weights")
{
    const SurfaceMesh m = make_icosphere(2);
    const CurvaturePacket p = compute_curvature(m);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p.size());
    const Eigen::VectorXd w = vertex_density_to_triangle_weights(m, p.vertex_area, ones);
    double total = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) total += w[static_cast<Eigen::Index>(t)] * m.triangle_area(t);
    CHECK(total == doctest::Approx(m.total_area()).epsilon(1e-13));

    const Eigen::VectorXd h2 = p.mean_curvature_vec.rowwise().squaredNorm();
    CHECK(ball_willmore(m, p, Eigen::Vector3d::Zero(), 2.0) == doctest::Approx(h2.dot(p.vertex_area)).epsilon(1e-13));
}

TEST_CASE("constants")
{
    CHECK(monotonicity_constant(0.5) == doctest::Approx(3.0 / 16.0 + 0.5));
    CHECK(monotonicity_constant(1.0) == 0.4375);
    CHECK_THROWS_AS(monotonicity_constant(0.0), BadSample);

    const LemmaConstants k = lemma_constants(0.25, 4 * kPi);
    CHECK(k.epsilon_gamma == doctest::Approx(2 * kPi / (24 * kPi + 7)).epsilon(1e-15));
    CHECK(k.a_gamma_w == doctest::Approx(1.0 / (4 * (24 * kPi + 7))).epsilon(1e-15));
    CHECK_THROWS_AS(lemma_constants(0.5, 1.0), InvalidGamma);
    CHECK_THROWS_AS(lemma_constants(0.0, 1.0), InvalidGamma);
    CHECK_THROWS_AS(lemma_constants(0.1, 0.0), NonPositiveW);

    CHECK(total_curvature_sigma(0.5) == doctest::Approx(0.5 / 10.5));
    CHECK(total_curvature_sigma(0.1) == doctest::Approx(0.1 / 18.1));
}

TEST_CASE("sup radius search")
{
    CHECK(sup_radius([](double) { return true; }, 2.0) == 2.0);
    CHECK(sup_radius([](double) { return false; }, 2.0) == 0.0);
    CHECK(sup_radius([](double r) { return r <= 0.3; }, 1.0) == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(sup_radius([](double r) { return r <= 1e-4; }, 1.0) == doctest::Approx(1e-4).epsilon(1e-5));

    const auto g = geometric_grid(0.01, 1.0, 3);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == doctest::Approx(0.01));
    CHECK(g[1] == doctest::Approx(0.1));
    CHECK(g[2] == 1.0);
}

TEST_CASE("nonconcentration radius")
{
    const SurfaceMesh sphere = make_icosphere(4);
    // Theta stays near 1 for a unit sphere, so the search runs to the cap.
    CHECK(nonconcentration_radius(sphere, sphere.vertex(0), 0.1, 1.5) == 1.5);
    CHECK_THROWS_AS(nonconcentration_radius(sphere, sphere.vertex(0), 1.0, 1.0), InvalidGamma);
    CHECK_THROWS_AS(nonconcentration_radius(sphere, sphere.vertex(0), 0.1, 0.0), NonPositiveRadius);

    // Two tangent spheres: density 2 at the contact point for every small r.
    const SurfaceMesh touching = make_tangent_spheres(4);
    const double r_contact = nonconcentration_radius(touching, Eigen::Vector3d::Zero(), 0.1, 1.0);
    CHECK(r_contact < 1e-3);
    const double r_away = nonconcentration_radius(touching, Eigen::Vector3d(0, 0, 2), 0.1, 1.0);
    CHECK(r_away == 1.0);
}

TEST_CASE("radii report on a sphere")
{
    const SurfaceMesh m = make_icosphere(3);
    const CurvaturePacket p = compute_curvature(m);
    const RadiiReport r = radii_report(m, p, m.vertex(0), 0.2, 0.5, 1.0);
    CHECK(r.sigma == doctest::Approx(total_curvature_sigma(0.2)));
    CHECK(r.r_D == 1.0);
    CHECK(r.r_eps <= r.sigma);
    CHECK(r.r_eps > 0.0);
    CHECK(total_curvature_radius(m, p, m.vertex(0), 1e3, r.sigma) == r.sigma);
}

TEST_CASE("monotonicity audit")
{
    const SurfaceMesh m = make_icosphere(3);
    const CurvaturePacket p = compute_curvature(m);
    const auto samples = random_monotonicity_samples(m, 200, 7, 0.01, 1.0);
    REQUIRE(samples.size() == 200);
    for (const auto& s : samples) {
        CHECK(s.r <= s.a);
        CHECK(s.a >= 0.01);
        CHECK(s.a <= 1.0);
        CHECK(s.center.norm() <= 1.0 + 1e-12);
        CHECK(s.center.norm() >= 0.99);
    }
    CHECK(monotonicity_audit(m, p, samples, 0.5).empty());

    const auto again = random_monotonicity_samples(m, 200, 7, 0.01, 1.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK((again[i].center.array() == samples[i].center.array()).all());
        CHECK(again[i].r == samples[i].r);
    }

    std::vector<MonotonicitySample> bad{{Eigen::Vector3d::Zero(), 0.5, 0.25}};
    CHECK_THROWS_AS(evaluate_monotonicity(m, p, bad, 0.5), BadSample);
    bad[0] = {Eigen::Vector2d::Zero(), 0.1, 0.2};
    CHECK_THROWS_AS(evaluate_monotonicity(m, p, bad, 0.5), BadSample);
    CHECK_THROWS_AS(random_monotonicity_samples(m, 1, 1, 0.0, 1.0), BadSample);
}

TEST_CASE("farthest point samples")
{
    const SurfaceMesh m = make_icosphere(2);
    const auto s = farthest_point_samples(m, 2);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == 0);
    CHECK((m.vertex(0) + m.vertex(static_cast<std::size_t>(s[1]))).norm() < 1e-12);
    CHECK(farthest_point_samples(m, 100000).size() == m.num_vertices());
}

TEST_CASE("local willmore bound on a round sphere")
{
    const SurfaceMesh m = make_icosphere(4);
    const CurvaturePacket p = compute_curvature(m);
    const LocalWillmoreCheck c = local_willmore_bound_check(m, p, 0.05, 4 * kPi, 0.25);
    CHECK(c.holds);
    CHECK(c.a == doctest::Approx(lemma_constants(0.25, 4 * kPi).a_gamma_w));
    CHECK(c.worst_ratio > 0.0);
    CHECK_THROWS_AS(local_willmore_bound_check(m, p, 0.5, 4 * kPi, 0.25), PreconditionUnmet);
    const SurfaceMesh big = make_icosphere(3, 1.5);
    CHECK_THROWS_AS(local_willmore_bound_check(big, compute_curvature(big), 0.05, 4 * kPi, 0.25), PreconditionUnmet);
    CHECK(local_willmore_profile(m, p, 0.1, 8) > 0.0);
}
