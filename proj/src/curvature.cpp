#include <cmclab/curvature.hpp>
#include <cmclab/errors.hpp>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cmclab {

namespace {

// Corner geometry of one triangle: twice the area and, per corner k, the
// cotangent and angle at that corner plus the squared length of the
// opposite edge.
struct TriangleCorners
{
    double twice_area = 0.0;
    std::array<double, 3> cot{};
    std::array<double, 3> angle{};
    std::array<double, 3> opposite_sq{};
};

TriangleCorners corner_geometry(const Positions& v, const Triangle& tri)
{
    TriangleCorners g;
    const Eigen::VectorXd e0 = v.row(tri[2]) - v.row(tri[1]); // opposite corner 0
    const Eigen::VectorXd e1 = v.row(tri[0]) - v.row(tri[2]); // opposite corner 1
    const Eigen::VectorXd e2 = v.row(tri[1]) - v.row(tri[0]); // opposite corner 2
    g.opposite_sq = {e0.squaredNorm(), e1.squaredNorm(), e2.squaredNorm()};
    g.twice_area = std::sqrt(std::max(0.0, g.opposite_sq[1] * g.opposite_sq[2] - std::pow(e1.dot(e2), 2)));
    // Corner k sits between the two edges that are not opposite to it.
    const double d0 = -e1.dot(e2);
    const double d1 = -e2.dot(e0);
    const double d2 = -e0.dot(e1);
    const std::array<double, 3> dots{d0, d1, d2};
    for (int k = 0; k < 3; ++k) {
        g.cot[k] = dots[k] / g.twice_area;
        g.angle[k] = std::atan2(g.twice_area, dots[k]);
    }
    return g;
}

void require_nondegenerate(const TriangleCorners& g, std::size_t t, double area_floor)
{
    if (!(0.5 * g.twice_area >= area_floor)) {
        throw DegenerateTriangle(
            "triangle " + std::to_string(t) + " has area " + std::to_string(0.5 * g.twice_area) +
            " below the floor");
    }
}

} // namespace

Eigen::SparseMatrix<double> cotangent_laplacian(const SurfaceMesh& mesh, double area_floor)
{
    const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(mesh.num_triangles() * 12);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const TriangleCorners g = corner_geometry(mesh.vertices(), tri);
        require_nondegenerate(g, t, area_floor);
        for (int k = 0; k < 3; ++k) {
            const int i = tri[(k + 1) % 3];
            const int j = tri[(k + 2) % 3];
            const double w = 0.5 * g.cot[k];
            entries.emplace_back(i, j, w);
            entries.emplace_back(j, i, w);
            entries.emplace_back(i, i, -w);
            entries.emplace_back(j, j, -w);
        }
    }
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(entries.begin(), entries.end());
    return L;
}

Eigen::VectorXd mixed_voronoi_areas(const SurfaceMesh& mesh)
{
    Eigen::VectorXd area = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    const double half_pi = 0.5 * std::numbers::pi;
    for (const auto& tri : mesh.triangles()) {
        const TriangleCorners g = corner_geometry(mesh.vertices(), tri);
        const double a = 0.5 * g.twice_area;
        int obtuse = -1;
        for (int k = 0; k < 3; ++k) {
            if (g.angle[k] > half_pi) obtuse = k;
        }
        for (int k = 0; k < 3; ++k) {
            double share = 0.0;
            if (obtuse < 0) {
                // Voronoi region of corner k: the two edges meeting at k,
                // each weighted by the cotangent of the angle facing it.
                const int k1 = (k + 1) % 3;
                const int k2 = (k + 2) % 3;
                share = (g.opposite_sq[k2] * g.cot[k2] + g.opposite_sq[k1] * g.cot[k1]) / 8.0;
            } else {
                share = (k == obtuse) ? 0.5 * a : 0.25 * a;
            }
            area[tri[k]] += share;
        }
    }
    return area;
}

Eigen::VectorXd angle_sums(const SurfaceMesh& mesh)
{
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (const auto& tri : mesh.triangles()) {
        const TriangleCorners g = corner_geometry(mesh.vertices(), tri);
        for (int k = 0; k < 3; ++k) sums[tri[k]] += g.angle[k];
    }
    return sums;
}

CurvaturePacket compute_curvature(const SurfaceMesh& mesh, double area_floor)
{
    CurvaturePacket p;
    const Eigen::SparseMatrix<double> L = cotangent_laplacian(mesh, area_floor);
    p.vertex_area = mixed_voronoi_areas(mesh);

    const Positions lx = L * mesh.vertices();
    p.mean_curvature_vec = lx.array().colwise() / p.vertex_area.array();

    const Eigen::VectorXd defect = (2.0 * std::numbers::pi) - angle_sums(mesh).array();
    p.gaussian_curvature = defect.array() / p.vertex_area.array();

    const Eigen::VectorXd h2 = p.mean_curvature_vec.rowwise().squaredNorm();
    p.sff_density = h2 - 2.0 * p.gaussian_curvature;
    p.tracefree_density = 0.5 * h2 - 2.0 * p.gaussian_curvature;

    if (mesh.ambient_dim() == 3) {
        Positions normals = Positions::Zero(static_cast<Eigen::Index>(mesh.num_vertices()), 3);
        const auto& v = mesh.vertices();
        for (const auto& tri : mesh.triangles()) {
            const Eigen::Vector3d a = v.row(tri[0]).transpose();
            const Eigen::Vector3d b = v.row(tri[1]).transpose();
            const Eigen::Vector3d c = v.row(tri[2]).transpose();
            // Oriented area vector; outward for a positively enclosing mesh.
            const Eigen::RowVector3d n = (b - a).cross(c - a).transpose();
            for (int k = 0; k < 3; ++k) normals.row(tri[k]) -= n;
        }
        normals.rowwise().normalize();
        p.unit_normal = std::move(normals);
    }
    return p;
}

Eigen::VectorXd scalar_mean_curvature(const SurfaceMesh& mesh, const CurvaturePacket& packet)
{
    if (mesh.ambient_dim() != 3) {
        throw CodimensionError("scalar mean curvature needs a hypersurface in R^3");
    }
    const double vol = signed_volume(mesh);
    if (!(vol >= 1e-12)) {
        throw DegenerateVolume("signed enclosed volume " + std::to_string(vol) + " is not positive");
    }
    return (packet.mean_curvature_vec.array() * packet.unit_normal->array()).rowwise().sum();
}

Eigen::VectorXd scalar_mean_curvature_any_orientation(const SurfaceMesh& mesh, const CurvaturePacket& packet)
{
    if (mesh.ambient_dim() != 3) {
        throw CodimensionError("scalar mean curvature needs a hypersurface in R^3");
    }
    const double vol = signed_volume(mesh);
    if (!(std::abs(vol) >= 1e-12)) {
        throw DegenerateVolume("enclosed volume " + std::to_string(vol) + " is degenerate");
    }
    const double side = vol > 0 ? 1.0 : -1.0;
    return side * (packet.mean_curvature_vec.array() * packet.unit_normal->array()).rowwise().sum();
}

} // namespace cmclab
