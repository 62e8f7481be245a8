#pragma once

#include <cmclab/mesh.hpp>

#include <Eigen/SparseCore>

#include <optional>

namespace cmclab {

/// Per-vertex first- and second-order quantities of the PL immersion.
struct CurvaturePacket
{
    Eigen::VectorXd vertex_area;        // mixed Voronoi cell area
    Positions mean_curvature_vec;       // discrete H, one row per vertex
    Eigen::VectorXd gaussian_curvature; // angle defect / cell area
    Eigen::VectorXd sff_density;        // |A|^2 = |H|^2 - 2K
    Eigen::VectorXd tracefree_density;  // |A°|^2 = |H|^2/2 - 2K
    /// Only for n = 3: area-weighted vertex normals, pointing inside when
    /// the signed enclosed volume is positive.
    std::optional<Positions> unit_normal;

    Eigen::Index size() const { return vertex_area.size(); }
};

/// Cotangent Laplacian L with L_ij = (cot a + cot b)/2 and zero row sums, so
/// x^T L x <= 0. Edge geometry is taken in R^n.
Eigen::SparseMatrix<double> cotangent_laplacian(const SurfaceMesh& mesh, double area_floor = kDefaultAreaFloor);

/// Mixed Voronoi cell areas; they sum to the mesh area.
Eigen::VectorXd mixed_voronoi_areas(const SurfaceMesh& mesh);

/// Sum of interior angles at each vertex.
Eigen::VectorXd angle_sums(const SurfaceMesh& mesh);

/// Unit sphere gives H ~ -2F. Throws DegenerateTriangle below the area floor.
CurvaturePacket compute_curvature(const SurfaceMesh& mesh, double area_floor = kDefaultAreaFloor);

/// H_i = <H_i, N_i> with inner normal; unit sphere gives +2. Requires n = 3
/// and positive signed volume.
Eigen::VectorXd scalar_mean_curvature(const SurfaceMesh& mesh, const CurvaturePacket& packet);

/// Same as scalar_mean_curvature, but takes the inner side from the sign of
/// the enclosed volume instead of requiring it to be positive.
Eigen::VectorXd scalar_mean_curvature_any_orientation(const SurfaceMesh& mesh, const CurvaturePacket& packet);

} // namespace cmclab
