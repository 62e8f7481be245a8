#pragma once

#include <cmclab/curvature.hpp>
#include <cmclab/mesh.hpp>

#include <optional>

namespace cmclab {

/// Global integrals of a closed mesh. Integrals are vertex-area weighted sums
/// of the per-vertex densities in a CurvaturePacket.
struct EnergyReport
{
    double area = 0.0;
    double willmore_quarter = 0.0; // W = 1/4 int |H|^2
    double willmore_raw = 0.0;     // int |H|^2
    /// int |H - Hbar|^2 with scalar H = <H, N>; n = 3 with nonzero volume only.
    std::optional<double> deficit_l2;
    std::optional<double> mean_scalar; // Hbar
    /// int ||H| - avg |H||^2; available in every codimension.
    double deficit_abs = 0.0;
    double j_value = 0.0; // min over c of int |H + c (F - centroid)|^2
    double j_c = 0.0;     // the minimizing c
    double tracefree_energy = 0.0; // int |A°|^2
    double total_curvature = 0.0;  // int |A|^2
    int euler_char = 0;
    double diameter = 0.0;
};

struct JFunctional
{
    double j_value = 0.0;
    double j_c = 0.0;
    double moment = 0.0; // int |F - centroid|^2
};

EnergyReport energy_report(const SurfaceMesh& mesh, const CurvaturePacket& packet);

/// Closed-form minimizer c = 2 area / int |F - centroid|^2 and
/// J = int |H|^2 - c^2 int |F - centroid|^2 (clamped at 0 against rounding).
JFunctional j_functional(const SurfaceMesh& mesh, const CurvaturePacket& packet);

/// int |H + c (F - centroid)|^2 summed directly, for cross-checking J.
double j_residual_direct(const SurfaceMesh& mesh, const CurvaturePacket& packet, double c);

/// int |H + c F|^2 without recentering.
double sphere_residual(const SurfaceMesh& mesh, const CurvaturePacket& packet, double c);

/// Exact max pairwise vertex distance (bounding-sphere pruned).
double diameter(const SurfaceMesh& mesh);

struct CBounds
{
    double lower = 0.0; // (16 pi - eps^2) / (2 area)
    double upper = 0.0; // 2 W / area
    double c = 0.0;
    bool holds = false;
};

/// Checks (16 pi - eps^2)/(2 area) <= c <= 2W/area with a relative allowance
/// on both endpoints. Throws PreconditionUnmet if J exceeds eps^2.
CBounds c_bounds_check(const EnergyReport& report, double epsilon, double allowance = 0.02);

struct DiameterBound
{
    bool holds = false;
    double slack = 0.0; // 28 sqrt(area W) - diameter
};

DiameterBound diameter_bound_check(const EnergyReport& report);

struct AlexandrovReport
{
    double enclosed_volume = 0.0;
    double h0 = 0.0;             // 2 area / (3 volume)
    double delta2 = 0.0;         // (avg |H / h0 - 1|^2)^(1/2)
    double rescale_factor = 0.0; // sqrt(4 pi / area)
    bool flipped = false;        // orientation was reversed to make the volume positive
};

/// Requires n = 3. A negative volume is fixed by reversing the orientation
/// once; a volume that is still not positive raises NegativeVolume.
AlexandrovReport alexandrov_report(const SurfaceMesh& mesh, const CurvaturePacket& packet);

struct RescalingCheck
{
    double scaled_area = 0.0;
    double delta2 = 0.0;
    double deficit_l2 = 0.0;   // int |H - Hbar|^2 of the rescaled surface
    double deficit_bound = 0.0; // 4 V delta2^2
    double scalar_h_sq = 0.0;  // int H^2 of the rescaled surface
    double willmore_raw = 0.0; // int |H|^2 of the rescaled surface (reported)
    double willmore_bound = 0.0; // 4 (1 + delta2)^2 V
    bool area_ok = false;
    bool deficit_ok = false;
    bool willmore_ok = false;

    bool holds() const { return area_ok && deficit_ok && willmore_ok; }
};

/// Rescales by sqrt(4 pi / area) and checks the three conclusions for a
/// surface with h0 = 2 and area <= V. Throws PreconditionUnmet when h0 is
/// more than 1% away from 2 or the area exceeds V.
RescalingCheck rescaling_lemma_check(const SurfaceMesh& mesh, double v_bound);

/// Hbar >= 2 sqrt(1 - eps^2 / (16 pi)) - 0.02 for a surface of area ~4 pi
/// with int |H - Hbar|^2 <= eps^2.
bool mean_lower_bound_check(const EnergyReport& report, double epsilon);

double mean_lower_bound(double epsilon);

} // namespace cmclab
