#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace cmclab {

/// Vertex positions, one row per vertex, one column per ambient coordinate.
using Positions = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Triangle = std::array<int, 3>;

inline constexpr double kDefaultAreaFloor = 1e-12;

///
/// Oriented triangle mesh immersed in R^n, read as the piecewise-linear
/// immersion of a closed surface. The mesh is immutable after construction.
///
/// The constructor only checks what every operation relies on (index range,
/// distinct corners, n >= 3). Closedness, orientation and the degeneracy floor
/// are reported by validate() and enforced by require_valid(); loaders and
/// generators always call the latter.
///
class SurfaceMesh {
public:
    SurfaceMesh(Positions vertices, std::vector<Triangle> triangles);

    int ambient_dim() const { return static_cast<int>(m_vertices.cols()); }
    std::size_t num_vertices() const { return static_cast<std::size_t>(m_vertices.rows()); }
    std::size_t num_triangles() const { return m_triangles.size(); }

    const Positions& vertices() const { return m_vertices; }
    const std::vector<Triangle>& triangles() const { return m_triangles; }

    Eigen::VectorXd vertex(std::size_t i) const
    {
        return m_vertices.row(static_cast<Eigen::Index>(i)).transpose();
    }

    double triangle_area(std::size_t t) const;
    double total_area() const;

private:
    Positions m_vertices;
    std::vector<Triangle> m_triangles;
};

struct MeshDiagnostics
{
    bool is_closed = false;
    bool is_manifold = false; // no edge shared by more than two triangles
    bool is_oriented = false;
    int euler_characteristic = 0;
    std::size_t num_edges = 0;
    std::size_t num_components = 0;
    std::size_t degenerate_triangles = 0;
    double min_triangle_area = 0.0;
    /// Total genus (2c - chi)/2 over c components; set only for closed
    /// oriented meshes where it is a nonnegative integer.
    std::optional<int> genus;

    bool ok() const { return is_closed && is_manifold && is_oriented && degenerate_triangles == 0; }
};

MeshDiagnostics validate(const SurfaceMesh& mesh, double area_floor = kDefaultAreaFloor);

/// Throws TopologyError describing the first violated invariant.
void require_valid(const SurfaceMesh& mesh, double area_floor = kDefaultAreaFloor);

/// Undirected edges (i < j), sorted.
std::vector<std::array<int, 2>> unique_edges(const SurfaceMesh& mesh);

/// x -> R x + t. R must be orthogonal within 1e-10.
SurfaceMesh rigid_transform(
    const SurfaceMesh& mesh,
    const Eigen::MatrixXd& rotation,
    const Eigen::VectorXd& translation);

SurfaceMesh scale_mesh(const SurfaceMesh& mesh, double factor);
SurfaceMesh translate_mesh(const SurfaceMesh& mesh, const Eigen::VectorXd& offset);

/// Reverses the vertex order of every triangle.
SurfaceMesh flip_orientation(const SurfaceMesh& mesh);

/// Both meshes side by side; indices of `b` are shifted past `a`.
SurfaceMesh disjoint_union(const SurfaceMesh& a, const SurfaceMesh& b);

/// Divergence-theorem volume sum_T <a, b x c>/6. Requires n = 3.
double signed_volume(const SurfaceMesh& mesh);

/// Area of a triangle with corners given as points in R^n.
double triangle_area(
    const Eigen::Ref<const Eigen::VectorXd>& a,
    const Eigen::Ref<const Eigen::VectorXd>& b,
    const Eigen::Ref<const Eigen::VectorXd>& c);

} // namespace cmclab
