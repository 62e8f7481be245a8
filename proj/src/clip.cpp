#include <cmclab/clip.hpp>

#include <algorithm>
#include <cmath>

namespace cmclab {

namespace {

double cross2(const Eigen::Vector2d& u, const Eigen::Vector2d& v) { return u.x() * v.y() - u.y() * v.x(); }

// Signed area of the circular sector swept from direction u to direction v.
double sector(const Eigen::Vector2d& u, const Eigen::Vector2d& v, double r_sq)
{
    // A zero endpoint spans no angle; atan2(-0, -0) would report -pi.
    if (u.squaredNorm() == 0.0 || v.squaredNorm() == 0.0) return 0.0;
    return 0.5 * r_sq * std::atan2(cross2(u, v), u.dot(v));
}

// Signed area of disk ∩ triangle(O, a, b).
double edge_contribution(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r_sq)
{
    const Eigen::Vector2d d = b - a;
    const double qa = d.squaredNorm();
    if (qa == 0.0) return 0.0;
    const double qb = a.dot(d);
    const double qc = a.squaredNorm() - r_sq;
    const double disc = qb * qb - qa * qc;
    if (disc <= 0.0) return sector(a, b, r_sq);
    const double root = std::sqrt(disc);
    const double s1 = std::clamp((-qb - root) / qa, 0.0, 1.0);
    const double s2 = std::clamp((-qb + root) / qa, 0.0, 1.0);
    const Eigen::Vector2d p1 = a + s1 * d;
    const Eigen::Vector2d p2 = a + s2 * d;
    return sector(a, p1, r_sq) + 0.5 * cross2(p1, p2) + sector(p2, b, r_sq);
}

} // namespace

double triangle_disk_area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                          double radius)
{
    if (!(radius > 0.0)) return 0.0;
    const double r_sq = radius * radius;
    const double full = 0.5 * std::abs(cross2(p1 - p0, p2 - p0));
    if (p0.squaredNorm() <= r_sq && p1.squaredNorm() <= r_sq && p2.squaredNorm() <= r_sq) return full;
    const double s = edge_contribution(p0, p1, r_sq) + edge_contribution(p1, p2, r_sq) + edge_contribution(p2, p0, r_sq);
    return std::clamp(std::abs(s), 0.0, full);
}

double triangle_ball_area(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                          const Eigen::Ref<const Eigen::VectorXd>& c, const Eigen::Ref<const Eigen::VectorXd>& center,
                          double r)
{
    const Eigen::VectorXd u = b - a;
    const double lu = u.norm();
    const Eigen::VectorXd e1 = u / lu;
    Eigen::VectorXd w = c - a;
    const double c1 = w.dot(e1);
    w -= c1 * e1;
    const double c2 = w.norm();
    const Eigen::VectorXd e2 = w / c2;
    const Eigen::VectorXd x = center - a;
    const double x1 = x.dot(e1);
    const double x2 = x.dot(e2);
    const double d_sq = std::max(0.0, x.squaredNorm() - x1 * x1 - x2 * x2);
    const double rho_sq = r * r - d_sq;
    if (rho_sq <= 0.0) return 0.0;
    return triangle_disk_area(
        Eigen::Vector2d(-x1, -x2), Eigen::Vector2d(lu - x1, -x2), Eigen::Vector2d(c1 - x1, c2 - x2),
        std::sqrt(rho_sq));
}

} // namespace cmclab
