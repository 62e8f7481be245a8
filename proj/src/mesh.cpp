#include <cmclab/errors.hpp>
#include <cmclab/mesh.hpp>
#include <cmclab/numeric.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cmclab {

double triangle_area(
    const Eigen::Ref<const Eigen::VectorXd>& a,
    const Eigen::Ref<const Eigen::VectorXd>& b,
    const Eigen::Ref<const Eigen::VectorXd>& c)
{
    const Eigen::VectorXd u = b - a;
    const Eigen::VectorXd v = c - a;
    const double uu = u.squaredNorm();
    const double vv = v.squaredNorm();
    const double uv = u.dot(v);
    return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

SurfaceMesh::SurfaceMesh(Positions vertices, std::vector<Triangle> triangles)
    : m_vertices(std::move(vertices))
    , m_triangles(std::move(triangles))
{
    if (m_vertices.cols() < 3) {
        throw DimensionError(
            "ambient dimension must be at least 3, got " + std::to_string(m_vertices.cols()));
    }
    const int nv = static_cast<int>(m_vertices.rows());
    for (std::size_t t = 0; t < m_triangles.size(); ++t) {
        const auto& tri = m_triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv) {
                throw TopologyError(
                    "triangle " + std::to_string(t) + " references vertex " +
                    std::to_string(tri[k]) + " out of range [0, " + std::to_string(nv) + ")");
            }
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            throw TopologyError("triangle " + std::to_string(t) + " repeats a vertex");
        }
    }
    if (!m_vertices.allFinite()) {
        throw DimensionError("vertex positions must be finite");
    }
}

double SurfaceMesh::triangle_area(std::size_t t) const
{
    const auto& tri = m_triangles[t];
    return cmclab::triangle_area(
        m_vertices.row(tri[0]).transpose(),
        m_vertices.row(tri[1]).transpose(),
        m_vertices.row(tri[2]).transpose());
}

double SurfaceMesh::total_area() const
{
    std::vector<double> areas(m_triangles.size());
    for (std::size_t t = 0; t < m_triangles.size(); ++t) areas[t] = triangle_area(t);
    return pairwise_sum(areas);
}

namespace {

struct DirectedEdge
{
    int from;
    int to;
};

// Union-find over vertices for component counting.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : m_parent(n) { std::iota(m_parent.begin(), m_parent.end(), 0); }

    int find(int x)
    {
        while (m_parent[x] != x) {
            m_parent[x] = m_parent[m_parent[x]];
            x = m_parent[x];
        }
        return x;
    }

    void unite(int a, int b) { m_parent[find(a)] = find(b); }

private:
    std::vector<int> m_parent;
};

} // namespace

std::vector<std::array<int, 2>> unique_edges(const SurfaceMesh& mesh)
{
    std::vector<std::array<int, 2>> edges;
    edges.reserve(mesh.num_triangles() * 3);
    for (const auto& tri : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            edges.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

MeshDiagnostics validate(const SurfaceMesh& mesh, double area_floor)
{
    MeshDiagnostics d;

    std::vector<DirectedEdge> directed;
    directed.reserve(mesh.num_triangles() * 3);
    for (const auto& tri : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) directed.push_back({tri[k], tri[(k + 1) % 3]});
    }
    auto key = [](const DirectedEdge& e) {
        return std::array<int, 3>{std::min(e.from, e.to), std::max(e.from, e.to), e.from};
    };
    std::sort(directed.begin(), directed.end(), [&](const DirectedEdge& a, const DirectedEdge& b) {
        return key(a) < key(b);
    });

    bool closed = true;
    bool manifold = true;
    bool oriented = true;
    std::size_t num_edges = 0;
    for (std::size_t i = 0; i < directed.size();) {
        const int lo = std::min(directed[i].from, directed[i].to);
        const int hi = std::max(directed[i].from, directed[i].to);
        std::size_t j = i;
        int forward = 0;
        int backward = 0;
        while (j < directed.size() && std::min(directed[j].from, directed[j].to) == lo &&
               std::max(directed[j].from, directed[j].to) == hi) {
            (directed[j].from == lo ? forward : backward) += 1;
            ++j;
        }
        const int uses = forward + backward;
        ++num_edges;
        if (uses == 1) closed = false;
        if (uses > 2) manifold = false;
        if (forward > 1 || backward > 1) oriented = false;
        i = j;
    }

    d.is_closed = closed && manifold;
    d.is_manifold = manifold;
    d.is_oriented = oriented && manifold;
    d.num_edges = num_edges;
    d.euler_characteristic = static_cast<int>(mesh.num_vertices()) - static_cast<int>(num_edges) +
                             static_cast<int>(mesh.num_triangles());

    d.min_triangle_area = mesh.num_triangles() ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const double a = mesh.triangle_area(t);
        d.min_triangle_area = std::min(d.min_triangle_area, a);
        if (a < area_floor) ++d.degenerate_triangles;
    }

    DisjointSets sets(mesh.num_vertices());
    for (const auto& tri : mesh.triangles()) {
        sets.unite(tri[0], tri[1]);
        sets.unite(tri[1], tri[2]);
    }
    std::vector<char> is_root(mesh.num_vertices(), 0);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) is_root[sets.find(static_cast<int>(v))] = 1;
    d.num_components = static_cast<std::size_t>(std::count(is_root.begin(), is_root.end(), 1));

    if (d.is_closed && d.is_oriented) {
        const int twice_genus = 2 * static_cast<int>(d.num_components) - d.euler_characteristic;
        if (twice_genus >= 0 && twice_genus % 2 == 0) d.genus = twice_genus / 2;
    }
    return d;
}

void require_valid(const SurfaceMesh& mesh, double area_floor)
{
    if (mesh.num_triangles() == 0) throw TopologyError("mesh has no triangles");
    const MeshDiagnostics d = validate(mesh, area_floor);
    if (!d.is_manifold) throw TopologyError("non-manifold edge: shared by more than two triangles");
    if (!d.is_closed) throw TopologyError("open boundary: some edge belongs to a single triangle");
    if (!d.is_oriented) throw TopologyError("inconsistent orientation across a shared edge");
    if (d.degenerate_triangles > 0) {
        throw TopologyError(
            std::to_string(d.degenerate_triangles) + " triangle(s) below the area floor " +
            std::to_string(area_floor));
    }
}

SurfaceMesh rigid_transform(
    const SurfaceMesh& mesh,
    const Eigen::MatrixXd& rotation,
    const Eigen::VectorXd& translation)
{
    const int n = mesh.ambient_dim();
    if (rotation.rows() != n || rotation.cols() != n || translation.size() != n) {
        throw DimensionError("rigid transform dimensions do not match the ambient dimension");
    }
    const double defect =
        (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10)) {
        throw NotOrthogonal("matrix is not orthogonal (max |R^T R - I| = " + std::to_string(defect) + ")");
    }
    Positions p = mesh.vertices() * rotation.transpose();
    p.rowwise() += translation.transpose();
    return SurfaceMesh(std::move(p), mesh.triangles());
}

SurfaceMesh scale_mesh(const SurfaceMesh& mesh, double factor)
{
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw NonPositiveFactor("scale factor must be positive, got " + std::to_string(factor));
    }
    return SurfaceMesh(mesh.vertices() * factor, mesh.triangles());
}

SurfaceMesh translate_mesh(const SurfaceMesh& mesh, const Eigen::VectorXd& offset)
{
    if (offset.size() != mesh.ambient_dim()) throw DimensionError("offset dimension mismatch");
    Positions p = mesh.vertices();
    p.rowwise() += offset.transpose();
    return SurfaceMesh(std::move(p), mesh.triangles());
}

SurfaceMesh flip_orientation(const SurfaceMesh& mesh)
{
    std::vector<Triangle> tris = mesh.triangles();
    for (auto& t : tris) std::swap(t[1], t[2]);
    return SurfaceMesh(mesh.vertices(), std::move(tris));
}

SurfaceMesh disjoint_union(const SurfaceMesh& a, const SurfaceMesh& b)
{
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("ambient dimensions differ");
    Positions p(a.vertices().rows() + b.vertices().rows(), a.ambient_dim());
    p << a.vertices(), b.vertices();
    std::vector<Triangle> tris = a.triangles();
    const int shift = static_cast<int>(a.num_vertices());
    for (auto t : b.triangles()) tris.push_back({t[0] + shift, t[1] + shift, t[2] + shift});
    return SurfaceMesh(std::move(p), std::move(tris));
}

double signed_volume(const SurfaceMesh& mesh)
{
    if (mesh.ambient_dim() != 3) throw CodimensionError("enclosed volume requires ambient dimension 3");
    std::vector<double> parts(mesh.num_triangles());
    const auto& v = mesh.vertices();
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const Eigen::Vector3d a = v.row(tri[0]).transpose();
        const Eigen::Vector3d b = v.row(tri[1]).transpose();
        const Eigen::Vector3d c = v.row(tri[2]).transpose();
        parts[t] = a.dot(b.cross(c)) / 6.0;
    }
    return pairwise_sum(parts);
}

} // namespace cmclab
