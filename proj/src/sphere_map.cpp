#include <cmclab/curvature.hpp>
#include <cmclab/errors.hpp>
#include <cmclab/functionals.hpp>
#include <cmclab/mesh_io.hpp>
#include <cmclab/sphere_map.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

namespace cmclab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Planar coordinates (|u|, 0), (x, y) of a triangle with edge vectors u, v.
Eigen::Matrix2d planar_edges(const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& v)
{
    const double lu = u.norm();
    const double x = u.dot(v) / lu;
    const double y = std::sqrt(std::max(0.0, v.squaredNorm() - x * x));
    Eigen::Matrix2d m;
    m << lu, x, 0.0, y;
    return m;
}

double triangle_qc(const Positions& image, const Positions& domain, const Triangle& t)
{
    const Eigen::Matrix2d p = planar_edges(image.row(t[1]) - image.row(t[0]), image.row(t[2]) - image.row(t[0]));
    const Eigen::Matrix2d q = planar_edges(domain.row(t[1]) - domain.row(t[0]), domain.row(t[2]) - domain.row(t[0]));
    if (p.determinant() <= 0.0 || q.determinant() <= 0.0) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2d s = Eigen::JacobiSVD<Eigen::Matrix2d>(q * p.inverse()).singularValues();
    return s[0] / s[1];
}

// Number of triangles whose orientation on the sphere disagrees with the majority.
int count_folds(const Positions& domain, const std::vector<Triangle>& tris)
{
    int positive = 0;
    int negative = 0;
    for (const auto& t : tris) {
        const Eigen::Vector3d a = domain.row(t[0]).transpose();
        const Eigen::Vector3d b = domain.row(t[1]).transpose();
        const Eigen::Vector3d c = domain.row(t[2]).transpose();
        const double det = a.dot(b.cross(c));
        if (det > 0.0) {
            ++positive;
        } else {
            ++negative;
        }
    }
    return std::min(positive, negative);
}

Eigen::VectorXd lumped_mass(const Positions& x, const std::vector<Triangle>& tris)
{
    Eigen::VectorXd m = Eigen::VectorXd::Zero(x.rows());
    for (const auto& t : tris) {
        const double a = triangle_area(x.row(t[0]), x.row(t[1]), x.row(t[2]));
        for (int v : t) m[v] += a / 3.0;
    }
    return m;
}

// Centers at the mass-weighted centroid and rescales to total mass 4 pi.
void normalize_in_place(Positions& x, const std::vector<Triangle>& tris)
{
    const Eigen::VectorXd m = lumped_mass(x, tris);
    const double total = m.sum();
    const Eigen::RowVectorXd c = (m.transpose() * x) / total;
    x.rowwise() -= c;
    x *= std::sqrt(kFourPi / total);
}

// Top-3 principal coordinates about the weighted centroid.
Positions principal_coordinates(const Positions& x, const Eigen::VectorXd& w)
{
    if (x.cols() == 3) return x;
    const Eigen::RowVectorXd mu = (w.transpose() * x) / w.sum();
    const Positions centered = x.rowwise() - mu;
    const Eigen::MatrixXd cov = centered.transpose() * w.asDiagonal() * centered;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::MatrixXd basis = eig.eigenvectors().rightCols(3);
    return centered * basis;
}

void project_to_sphere(Positions& x)
{
    for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i).normalize();
}

// Image-area weighted centroid and second moment of points on the sphere.
std::pair<Eigen::Vector3d, Eigen::Matrix3d> sphere_moments(const Positions& x, const Eigen::VectorXd& w)
{
    const double total = w.sum();
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::Vector3d p = x.row(i).transpose();
        c += w[i] * p;
        e += w[i] * p * p.transpose();
    }
    return {c / total, e / total};
}

// One Newton step of the centering iteration; returns the applied point a.
Eigen::Vector3d centering_step(Positions& x, const Eigen::VectorXd& w)
{
    const auto [c, e] = sphere_moments(x, w);
    Eigen::Vector3d a = 0.5 * (Eigen::Matrix3d::Identity() - e).fullPivLu().solve(c);
    if (!a.allFinite()) a = 0.5 * c;
    if (a.norm() > 0.9) a *= 0.9 / a.norm();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x.row(i) = mobius_map(a, x.row(i).transpose()).normalized().transpose();
    }
    return a;
}

Positions conformal_flow(const SurfaceMesh& mesh, const SphereMapOptions& opt, int& steps)
{
    const auto& tris = mesh.triangles();
    Positions x = mesh.vertices();
    normalize_in_place(x, tris);
    const Eigen::SparseMatrix<double> l0 = cotangent_laplacian(SurfaceMesh(x, tris));
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    Eigen::SparseMatrix<double> diag(x.rows(), x.rows());
    diag.setIdentity();
    solver.analyzePattern(diag - opt.time_step * l0);
    steps = 0;
    for (int s = 0; s < opt.max_flow_steps; ++s) {
        const Eigen::VectorXd m = lumped_mass(x, tris);
        if (!(m.minCoeff() > 0.0)) break;
        Eigen::SparseMatrix<double> a = -opt.time_step * l0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) a.coeffRef(i, i) += m[i];
        solver.factorize(a);
        if (solver.info() != Eigen::Success) break;
        Positions next = solver.solve(m.asDiagonal() * x);
        if (!next.allFinite()) break;
        normalize_in_place(next, tris);
        // Radii ignore the slow rigid drift inside the degenerate first eigenspace.
        const double moved = (next.rowwise().norm() - x.rowwise().norm()).cwiseAbs().maxCoeff();
        x = std::move(next);
        steps = s + 1;
        if (moved < opt.flow_tolerance) break;
    }
    Positions y = principal_coordinates(x, lumped_mass(x, tris));
    const Eigen::VectorXd m = lumped_mass(y, tris);
    y.rowwise() -= (m.transpose() * y) / m.sum();
    project_to_sphere(y);
    return y;
}

// Projected Jacobi smoothing with positive cotangent weights, recentered by
// Möbius steps against the image cell areas.
Positions harmonic_fallback(const SurfaceMesh& mesh, Positions start, const Eigen::VectorXd& image_cells,
                            const SphereMapOptions& opt)
{
    const Eigen::SparseMatrix<double> l = cotangent_laplacian(mesh);
    Positions x = std::move(start);
    for (int sweep = 0; sweep < opt.max_fallback_sweeps; ++sweep) {
        Positions next = Positions::Zero(x.rows(), 3);
        for (int k = 0; k < l.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(l, k); it; ++it) {
                if (it.row() == it.col()) continue;
                next.row(it.row()) += std::max(it.value(), 1e-6) * x.row(it.col());
            }
        }
        project_to_sphere(next);
        x = std::move(next);
        if (sweep % 10 == 9) centering_step(x, image_cells);
    }
    return x;
}

double weighted_qc_mean(const SphereParam& p)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < p.triangles.size(); ++t) {
        const auto& tri = p.triangles[t];
        const double a = triangle_area(p.domain_positions.row(tri[0]), p.domain_positions.row(tri[1]),
                                       p.domain_positions.row(tri[2]));
        num += a * p.qc_distortion[static_cast<Eigen::Index>(t)];
        den += a;
    }
    return num / den;
}

} // namespace

double SphereParam::qc_mean() const { return weighted_qc_mean(*this); }

Eigen::Vector3d SphereParam::domain_centroid() const { return sphere_moments(domain_positions, image_cell_area).first; }

SurfaceMesh SphereParam::domain_mesh() const { return SurfaceMesh(domain_positions, triangles); }

SurfaceMesh SphereParam::image_mesh() const { return SurfaceMesh(image_positions, triangles); }

Eigen::Vector3d mobius_map(const Eigen::Vector3d& a, const Eigen::Vector3d& x)
{
    const Eigen::Vector3d d = x - a;
    const double d_sq = d.squaredNorm();
    return ((1.0 - a.squaredNorm()) * d - d_sq * a) / d_sq;
}

void refresh_sphere_param(SphereParam& p)
{
    const Eigen::VectorXd cells = mixed_voronoi_areas(p.domain_mesh());
    p.domain_cell_area = cells * (kFourPi / cells.sum());
    p.conformal_factor = 0.5 * (p.image_cell_area.array() / p.domain_cell_area.array()).log();
    p.qc_distortion.resize(static_cast<Eigen::Index>(p.triangles.size()));
    for (std::size_t t = 0; t < p.triangles.size(); ++t) {
        p.qc_distortion[static_cast<Eigen::Index>(t)] =
            triangle_qc(p.image_positions, p.domain_positions, p.triangles[t]);
    }
}

SphereParam conformal_to_sphere(const SurfaceMesh& mesh, const SphereMapOptions& options)
{
    const MeshDiagnostics diag = validate(mesh);
    if (!diag.is_closed || !diag.is_manifold || !diag.is_oriented || diag.num_components != 1) {
        throw TopologyError("sphere map needs a closed oriented connected manifold mesh");
    }
    if (diag.euler_characteristic != 2) {
        throw GenusError("sphere map needs genus 0, got chi = " + std::to_string(diag.euler_characteristic));
    }

    SphereParam p;
    p.image_positions = mesh.vertices();
    p.triangles = mesh.triangles();
    p.image_cell_area = mixed_voronoi_areas(mesh);
    p.image_area = mesh.total_area();

    auto gate_ok = [&](const SphereParam& q) {
        return count_folds(q.domain_positions, q.triangles) == 0 && q.qc_distortion.allFinite() &&
               q.qc_mean() <= options.qc_gate;
    };

    p.domain_positions = conformal_flow(mesh, options, p.flow_iterations);
    refresh_sphere_param(p);
    if (gate_ok(p)) return p;

    p.used_fallback = true;
    p.domain_positions = harmonic_fallback(mesh, p.domain_positions, p.image_cell_area, options);
    refresh_sphere_param(p);
    if (gate_ok(p)) return p;
    throw FlowDiverged("sphere map missed the quality gate: mean qc " + std::to_string(p.qc_mean()) + ", " +
                       std::to_string(count_folds(p.domain_positions, p.triangles)) + " folded triangles");
}

SphereParam mobius_normalize(const SphereParam& param, double tolerance, int max_iterations)
{
    SphereParam p = param;
    for (int it = 0; it <= max_iterations; ++it) {
        const Eigen::Vector3d c = p.domain_centroid();
        if (!c.allFinite() || c.norm() >= 1.0 - 1e-12) {
            throw CenteringDiverged("domain mass is concentrated at a point");
        }
        if (c.norm() < tolerance) {
            p.mobius_iterations = it;
            refresh_sphere_param(p);
            return p;
        }
        if (it == max_iterations) break;
        centering_step(p.domain_positions, p.image_cell_area);
    }
    throw CenteringDiverged("centroid not below " + std::to_string(tolerance) + " after " +
                            std::to_string(max_iterations) + " iterations");
}

RigidityReport align_rigid(const SphereParam& param, double target_radius)
{
    if (!(target_radius > 0.0)) throw NonPositiveRadius("target radius must be positive");
    const Positions& image = param.image_positions;
    const Eigen::Index n = image.cols();
    const Eigen::VectorXd& w = param.domain_cell_area;
    const double total = w.sum();

    RigidityReport r;
    Positions p3;
    Positions residual(image.rows(), n - 3);
    if (n == 3) {
        p3 = image;
        r.frame = Eigen::MatrixXd::Identity(3, 3);
        r.frame_origin = Eigen::VectorXd::Zero(3);
    } else {
        const Eigen::RowVectorXd mu = (w.transpose() * image) / total;
        const Positions centered = image.rowwise() - mu;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * w.asDiagonal() * centered);
        r.frame = eig.eigenvectors().rightCols(3);
        r.frame_origin = mu.transpose();
        p3 = centered * r.frame;
        residual = centered * eig.eigenvectors().leftCols(n - 3);
    }

    const Positions q = target_radius * param.domain_positions;
    Eigen::RowVector3d pbar = (w.transpose() * p3) / total;
    const Eigen::RowVector3d qbar = (w.transpose() * q) / total;
    Eigen::Matrix3d cov = (p3.rowwise() - pbar).transpose() * w.asDiagonal() * (q.rowwise() - qbar);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d s = svd.singularValues();
    if (!(s[1] > 1e-12 * std::max(s[0], 1e-300))) {
        throw DegenerateCovariance("cross-covariance has rank < 2");
    }
    Eigen::Vector3d d(1.0, 1.0, 1.0);
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
        if (n > 3) {
            // The handedness of the fitted 3-space is a gauge choice in R^n,
            // n > 3: a reflection inside it is a rotation of R^n.
            r.frame.col(2) *= -1.0;
            p3.col(2) *= -1.0;
            pbar[2] *= -1.0;
            cov.row(2) *= -1.0;
            svd.compute(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
        } else {
            d[2] = -1.0;
        }
    }
    r.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    r.translation = pbar.transpose() - r.rotation * qbar.transpose();

    // Difference field on the domain: pulled back displacement plus the
    // out-of-space residual in higher codimension.
    Eigen::MatrixXd diff(image.rows(), n);
    diff.leftCols(3) = ((p3.rowwise() - r.translation.transpose()) * r.rotation) - q;
    if (n > 3) diff.rightCols(n - 3) = residual;
    r.out_of_space_energy = n > 3 ? (w.asDiagonal() * residual.rowwise().squaredNorm()).sum() : 0.0;

    // -tr(D^T L D) equals sum_T area_T |grad D|^2 for the per-triangle affine
    // interpolant on the domain triangles.
    const Eigen::SparseMatrix<double> lap = cotangent_laplacian(param.domain_mesh());
    const Eigen::MatrixXd ld = lap * diff;
    const double zeroth = (w.asDiagonal() * diff.rowwise().squaredNorm()).sum();
    const double first = std::max(0.0, -(diff.cwiseProduct(ld)).sum());
    const double second = (ld.rowwise().squaredNorm().array() / w.array()).sum();
    r.w22_deficit = std::sqrt(zeroth + first + second);

    const Eigen::ArrayXd u = param.conformal_factor.array();
    r.sup_log_conformal = u.abs().maxCoeff();
    r.sup_exp_conformal = (u.exp() - 1.0).abs().maxCoeff();
    r.qc_max = param.qc_distortion.maxCoeff();
    r.qc_mean = param.qc_mean();
    return r;
}

RigidityReport rigidity_report(const SurfaceMesh& mesh, const SphereMapOptions& options)
{
    const double area = mesh.total_area();
    if (std::abs(area - kFourPi) > 0.005 * kFourPi) {
        throw PreconditionUnmet("rigidity report needs area 4 pi, got " + std::to_string(area));
    }
    const SphereParam param = mobius_normalize(conformal_to_sphere(mesh, options));
    RigidityReport r = align_rigid(param, 1.0);
    if (mesh.ambient_dim() == 3) {
        r.c_deviation = std::abs(j_functional(mesh, compute_curvature(mesh)).j_c - 2.0);
    }
    return r;
}

std::vector<std::filesystem::path> save_sphere_param(const SphereParam& param, const std::filesystem::path& stem)
{
    const std::string base = stem.string();
    std::vector<std::filesystem::path> out{base + "_domain.ndmesh", base + "_image.ndmesh", base + "_u.csv"};
    save_mesh(param.domain_mesh(), out[0], MeshFormat::NDMESH);
    save_mesh(param.image_mesh(), out[1], MeshFormat::NDMESH);
    std::ofstream csv(out[2], std::ios::binary);
    if (!csv) throw IoError("cannot open " + out[2].string());
    csv << "vertex,u\n";
    for (Eigen::Index i = 0; i < param.conformal_factor.size(); ++i) {
        csv << i << ',' << format_roundtrip(param.conformal_factor[i]) << '\n';
    }
    if (!csv) throw IoError("write failed for " + out[2].string());
    return out;
}

} // namespace cmclab
