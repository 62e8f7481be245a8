#pragma once

#include <cmclab/mesh.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <vector>

namespace cmclab {

/// Discrete conformal parametrization over the unit sphere. Vertex i of the
/// image mesh corresponds to domain vertex i; both share `triangles`.
struct SphereParam
{
    Positions domain_positions;       // unit vectors, V x 3
    Positions image_positions;        // V x n
    std::vector<Triangle> triangles;
    Eigen::VectorXd conformal_factor; // u with e^{2u} = image cell / domain cell
    Eigen::VectorXd qc_distortion;    // per triangle, >= 1
    Eigen::VectorXd domain_cell_area; // normalized to sum to 4 pi
    Eigen::VectorXd image_cell_area;  // mixed Voronoi cells of the image
    double image_area = 0.0;
    int flow_iterations = 0;
    bool used_fallback = false;
    int mobius_iterations = 0;

    /// Area-weighted mean of qc_distortion (domain triangle areas).
    double qc_mean() const;
    /// Image-area weighted centroid of the domain positions.
    Eigen::Vector3d domain_centroid() const;
    SurfaceMesh domain_mesh() const;
    SurfaceMesh image_mesh() const;
};

struct SphereMapOptions
{
    int max_flow_steps = 400;
    double time_step = 0.5;        // for area 4 pi
    double flow_tolerance = 1e-8;  // max change of a vertex radius per step
    double qc_gate = 1.05;         // area-weighted mean qc
    int max_fallback_sweeps = 4000;
};

/// Conformalized mean curvature flow to the round sphere followed by radial
/// projection. Falls back to projected harmonic smoothing when the flow output
/// folds or misses the quality gate. Throws GenusError unless chi = 2 and
/// FlowDiverged if neither route meets the gate.
SphereParam conformal_to_sphere(const SurfaceMesh& mesh, const SphereMapOptions& options = {});

/// Recomputes the domain cells, u and qc for the current domain positions.
void refresh_sphere_param(SphereParam& param);

/// phi_a(x) = ((1 - |a|^2)(x - a) - |x - a|^2 a) / |x - a|^2, a sphere
/// automorphism for |a| < 1.
Eigen::Vector3d mobius_map(const Eigen::Vector3d& a, const Eigen::Vector3d& x);

/// Moves the domain by sphere automorphisms until the image-area weighted
/// centroid has norm < tolerance. Throws CenteringDiverged after 100
/// iterations or if the mass sits on a single point.
SphereParam mobius_normalize(const SphereParam& param, double tolerance = 1e-9, int max_iterations = 100);

struct RigidityReport
{
    double w22_deficit = 0.0;
    double sup_log_conformal = 0.0; // max |u|
    double sup_exp_conformal = 0.0; // max |e^u - 1|
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity(); // R q + t ~ p
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
    double qc_max = 0.0;
    double qc_mean = 0.0;
    /// n > 3: orthonormal basis (n x 3) and origin of the best-fit 3-space in
    /// which rotation and translation act. Identity frame for n = 3.
    Eigen::MatrixXd frame;
    Eigen::VectorXd frame_origin;
    double out_of_space_energy = 0.0; // sum_i A_i |residual_i|^2
    std::optional<double> c_deviation; // |j_c - 2|, n = 3 only
};

/// Weighted Procrustes of image_positions against target_radius * domain
/// and the discrete W^{2,2} norm of the difference field on the domain.
/// Throws DegenerateCovariance when the cross-covariance has rank < 2.
RigidityReport align_rigid(const SphereParam& param, double target_radius = 1.0);

/// conformal_to_sphere, mobius_normalize, align_rigid(1). Throws
/// PreconditionUnmet unless the area is 4 pi within 0.5%.
RigidityReport rigidity_report(const SurfaceMesh& mesh, const SphereMapOptions& options = {});

/// Writes <stem>_domain.ndmesh, <stem>_image.ndmesh and <stem>_u.csv and
/// returns the paths.
std::vector<std::filesystem::path> save_sphere_param(const SphereParam& param, const std::filesystem::path& stem);

} // namespace cmclab
