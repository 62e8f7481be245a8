#include "support.hpp"

#include <cmclab/clip.hpp>

#include <doctest.h>

#include <array>
#include <vector>

using namespace cmclab;
using testing::kPi;

namespace {

double cross(const Eigen::Vector2d& u, const Eigen::Vector2d& v) { return u.x() * v.y() - u.y() * v.x(); }

// Inscribed n-gon of the disk clipped against the triangle's half-planes
// (Sutherland-Hodgman), measured by the shoelace formula.
double polygon_oracle(Eigen::Vector2d a, Eigen::Vector2d b, Eigen::Vector2d c, double r, int n)
{
    if (cross(b - a, c - a) < 0) std::swap(b, c);
    std::vector<Eigen::Vector2d> poly;
    for (int k = 0; k < n; ++k) {
        const double t = 2 * kPi * k / n;
        poly.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    const std::array<Eigen::Vector2d, 3> v{a, b, c};
    for (int e = 0; e < 3; ++e) {
        const Eigen::Vector2d p = v[e], q = v[(e + 1) % 3];
        auto side = [&](const Eigen::Vector2d& x) { return cross(q - p, x - p); };
        std::vector<Eigen::Vector2d> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Eigen::Vector2d& s = poly[i];
            const Eigen::Vector2d& t = poly[(i + 1) % poly.size()];
            const double ss = side(s), st = side(t);
            if (ss >= 0) out.push_back(s);
            if ((ss >= 0) != (st >= 0)) out.push_back(s + (t - s) * (ss / (ss - st)));
        }
        poly = std::move(out);
        if (poly.empty()) return 0.0;
    }
    double area = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) area += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * area;
}

} // namespace

TEST_CASE("closed-form clips")
{
    const Eigen::Vector2d o(0, 0);
    CHECK(triangle_disk_area(o, {10, 0}, {0, 10}, 1.0) == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(triangle_disk_area(o, {10, 0}, {5, 10 * std::sin(kPi / 3)}, 1.0) == doctest::Approx(kPi / 6).epsilon(1e-14));
    // Reversed orientation gives the same unsigned area.
    CHECK(triangle_disk_area(o, {0, 10}, {10, 0}, 1.0) == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(triangle_disk_area({-10, -10}, {10, -10}, {0, 10}, 1.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(triangle_disk_area({0.1, 0.1}, {0.3, 0.1}, {0.1, 0.2}, 1.0) == doctest::Approx(0.01).epsilon(1e-13));
    CHECK(triangle_disk_area({2, 2}, {3, 2}, {2, 3}, 1.0) == 0.0);
    CHECK(triangle_disk_area(o, {10, 0}, {0, 10}, 0.0) == 0.0);
}

TEST_CASE("half disk through a chord")
{
    // Triangle covering y >= 0 within the disk of radius 2.
    CHECK(triangle_disk_area({-10, 0}, {10, 0}, {0, 20}, 2.0) == doctest::Approx(2 * kPi).epsilon(1e-14));
    // Circular segment above y = 1 in the unit-radius-2 disk: r^2 acos(d/r) - d sqrt(r^2 - d^2).
    const double seg = 4 * std::acos(0.5) - std::sqrt(3.0);
    CHECK(triangle_disk_area({-10, 1}, {10, 1}, {0, 30}, 2.0) == doctest::Approx(seg).epsilon(1e-13));
}

TEST_CASE("property: agrees with a polygon clipping oracle")
{
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Eigen::VectorXd v = testing::random_vector(6, seed, 1.5);
        const Eigen::Vector2d a(v[0], v[1]), b(v[2], v[3]), c(v[4], v[5]);
        const double r = 0.3 + testing::random_vector(1, seed + 50)[0] * 0.5 + 0.5;
        const double exact = triangle_disk_area(a, b, c, r);
        const double tri = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        CHECK(exact >= 0.0);
        CHECK(exact <= tri + 1e-12);
        CHECK(exact <= kPi * r * r + 1e-12);
        // The inscribed 20000-gon misses about 1.6e-8 of the disk area.
        CHECK(std::abs(exact - polygon_oracle(a, b, c, r, 20000)) < 1e-7 * kPi * r * r);
    }
}

TEST_CASE("corners on the disk center")
{
    // Regression: a zero-length edge vector once produced a full-turn sector.
    const Eigen::Vector2d o(0, 0);
    // Up to 150 degrees the far edge stays outside the unit disk.
    for (int k = 1; k <= 10; ++k) {
        const double ang = k * kPi / 12;
        const Eigen::Vector2d far(5 * std::cos(ang), 5 * std::sin(ang));
        CHECK(triangle_disk_area(o, {5, 0}, far, 1.0) == doctest::Approx(ang / 2).epsilon(1e-13));
        CHECK(triangle_disk_area({5, 0}, far, o, 1.0) == doctest::Approx(ang / 2).epsilon(1e-13));
    }
}

TEST_CASE("ball clip in higher dimension")
{
    Eigen::VectorXd a = Eigen::VectorXd::Zero(4), b = a, c = a, center = a;
    a << -10, -10, 0, 0;
    b << 10, -10, 0, 0;
    c << 0, 10, 0, 0;
    center[3] = 0.6;
    CHECK(triangle_ball_area(a, b, c, center, 1.0) == doctest::Approx(kPi * 0.64).epsilon(1e-13));
    CHECK(triangle_ball_area(a, b, c, center, 0.5) == 0.0);
    center[2] = 0.8;
    center[3] = 0.0;
    CHECK(triangle_ball_area(a, b, c, center, 1.0) == doctest::Approx(kPi * 0.36).epsilon(1e-13));
}
