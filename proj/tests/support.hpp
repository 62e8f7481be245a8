#pragma once

#include <cmclab/generators.hpp>
#include <cmclab/mesh.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline cmclab::SurfaceMesh tetrahedron()
{
    cmclab::Positions p(4, 3);
    p << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
    return cmclab::SurfaceMesh(p, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}});
}

inline cmclab::SurfaceMesh octahedron()
{
    cmclab::Positions p(6, 3);
    p << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    return cmclab::SurfaceMesh(
        p, {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

/// Random orthogonal matrix (det +1) from a seeded Gaussian-free QR.
inline Eigen::MatrixXd random_rotation(int n, std::uint64_t seed)
{
    cmclab::SeededUniform rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.next() - 1.0;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

inline Eigen::VectorXd random_vector(int n, std::uint64_t seed, double scale = 1.0)
{
    cmclab::SeededUniform rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * (2.0 * rng.next() - 1.0);
    return v;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace testing
