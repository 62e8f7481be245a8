#pragma once

#include <Eigen/Core>

namespace cmclab {

/// Area of the intersection of the planar triangle (p0, p1, p2) with the
/// closed disk of the given radius centred at the origin. Exact up to
/// rounding: each edge contributes the signed area of disk ∩ (O, a, b),
/// split into circular sectors and a chord triangle.
double triangle_disk_area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                          double radius);

/// Area of the part of a triangle in R^n inside the closed ball B(center, r).
/// The ball meets the triangle's plane in a disk of radius sqrt(r^2 - d^2).
double triangle_ball_area(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                          const Eigen::Ref<const Eigen::VectorXd>& c, const Eigen::Ref<const Eigen::VectorXd>& center,
                          double r);

} // namespace cmclab
