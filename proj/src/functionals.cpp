#include <cmclab/errors.hpp>
#include <cmclab/functionals.hpp>
#include <cmclab/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace cmclab {

namespace {

constexpr double kPi = std::numbers::pi;

template <typename Density>
double integrate(const Eigen::VectorXd& area, Density density)
{
    std::vector<double> terms(static_cast<std::size_t>(area.size()));
    for (Eigen::Index i = 0; i < area.size(); ++i) terms[static_cast<std::size_t>(i)] = area[i] * density(i);
    return pairwise_sum(terms);
}

Eigen::RowVectorXd area_centroid(const SurfaceMesh& mesh, const Eigen::VectorXd& area)
{
    Eigen::RowVectorXd c(mesh.ambient_dim());
    const double total = integrate(area, [](Eigen::Index) { return 1.0; });
    for (int k = 0; k < mesh.ambient_dim(); ++k) {
        c[k] = integrate(area, [&](Eigen::Index i) { return mesh.vertices()(i, k); }) / total;
    }
    return c;
}

} // namespace

double diameter(const SurfaceMesh& mesh)
{
    const auto& v = mesh.vertices();
    const Eigen::RowVectorXd center = v.colwise().mean();
    const Eigen::VectorXd reach = (v.rowwise() - center).rowwise().norm();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(v.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return reach[a] > reach[b] || (reach[a] == reach[b] && a < b);
    });
    double best_sq = 0.0;
    double best = 0.0;
    for (std::size_t ia = 0; ia < order.size(); ++ia) {
        const Eigen::Index a = order[ia];
        if (2.0 * reach[a] <= best) break;
        for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
            const Eigen::Index b = order[ib];
            // Triangle inequality through the center bounds every later pair.
            if (reach[a] + reach[b] <= best) break;
            const double d_sq = (v.row(a) - v.row(b)).squaredNorm();
            if (d_sq > best_sq) {
                best_sq = d_sq;
                best = std::sqrt(d_sq);
            }
        }
    }
    return best;
}

JFunctional j_functional(const SurfaceMesh& mesh, const CurvaturePacket& packet)
{
    const Eigen::VectorXd& area = packet.vertex_area;
    const Eigen::RowVectorXd centroid = area_centroid(mesh, area);
    const Positions centered = mesh.vertices().rowwise() - centroid;

    JFunctional j;
    j.moment = integrate(area, [&](Eigen::Index i) { return centered.row(i).squaredNorm(); });
    if (!(j.moment >= 1e-12)) {
        throw DegeneratePositions("int |F - centroid|^2 = " + std::to_string(j.moment) + " is degenerate");
    }
    const double total_area = integrate(area, [](Eigen::Index) { return 1.0; });
    const double willmore_raw =
        integrate(area, [&](Eigen::Index i) { return packet.mean_curvature_vec.row(i).squaredNorm(); });
    j.j_c = 2.0 * total_area / j.moment;
    const double value = willmore_raw - j.j_c * j.j_c * j.moment;
    j.j_value = value < 0.0 ? 0.0 : value;
    return j;
}

double j_residual_direct(const SurfaceMesh& mesh, const CurvaturePacket& packet, double c)
{
    const Eigen::VectorXd& area = packet.vertex_area;
    const Eigen::RowVectorXd centroid = area_centroid(mesh, area);
    return integrate(area, [&](Eigen::Index i) {
        return (packet.mean_curvature_vec.row(i) + c * (mesh.vertices().row(i) - centroid)).squaredNorm();
    });
}

double sphere_residual(const SurfaceMesh& mesh, const CurvaturePacket& packet, double c)
{
    return integrate(packet.vertex_area, [&](Eigen::Index i) {
        return (packet.mean_curvature_vec.row(i) + c * mesh.vertices().row(i)).squaredNorm();
    });
}

EnergyReport energy_report(const SurfaceMesh& mesh, const CurvaturePacket& packet)
{
    EnergyReport r;
    const Eigen::VectorXd& area = packet.vertex_area;
    r.area = integrate(area, [](Eigen::Index) { return 1.0; });
    r.willmore_raw = integrate(area, [&](Eigen::Index i) { return packet.mean_curvature_vec.row(i).squaredNorm(); });
    r.willmore_quarter = 0.25 * r.willmore_raw;
    r.tracefree_energy = integrate(area, [&](Eigen::Index i) { return packet.tracefree_density[i]; });
    r.total_curvature = integrate(area, [&](Eigen::Index i) { return packet.sff_density[i]; });
    r.euler_char = validate(mesh).euler_characteristic;
    r.diameter = diameter(mesh);

    const Eigen::VectorXd abs_h = packet.mean_curvature_vec.rowwise().norm();
    const double abs_mean = integrate(area, [&](Eigen::Index i) { return abs_h[i]; }) / r.area;
    r.deficit_abs = integrate(area, [&](Eigen::Index i) { return std::pow(abs_h[i] - abs_mean, 2); });

    if (mesh.ambient_dim() == 3 && std::abs(signed_volume(mesh)) >= 1e-12) {
        const Eigen::VectorXd h = scalar_mean_curvature_any_orientation(mesh, packet);
        const double hbar = integrate(area, [&](Eigen::Index i) { return h[i]; }) / r.area;
        r.mean_scalar = hbar;
        r.deficit_l2 = integrate(area, [&](Eigen::Index i) { return std::pow(h[i] - hbar, 2); });
    }

    const JFunctional j = j_functional(mesh, packet);
    r.j_value = j.j_value;
    r.j_c = j.j_c;
    return r;
}

CBounds c_bounds_check(const EnergyReport& report, double epsilon, double allowance)
{
    const double eps_sq = epsilon * epsilon;
    if (report.j_value > eps_sq) {
        throw PreconditionUnmet(
            "J = " + std::to_string(report.j_value) + " exceeds eps^2 = " + std::to_string(eps_sq));
    }
    CBounds b;
    b.lower = (16.0 * kPi - eps_sq) / (2.0 * report.area);
    b.upper = 2.0 * report.willmore_quarter / report.area;
    b.c = report.j_c;
    b.holds = b.c >= b.lower * (1.0 - allowance) && b.c <= b.upper * (1.0 + allowance);
    return b;
}

DiameterBound diameter_bound_check(const EnergyReport& report)
{
    const double rhs = 28.0 * std::sqrt(report.area * report.willmore_quarter);
    return {report.diameter <= rhs, rhs - report.diameter};
}

AlexandrovReport alexandrov_report(const SurfaceMesh& mesh, const CurvaturePacket& packet)
{
    if (mesh.ambient_dim() != 3) throw CodimensionError("Alexandrov deficit needs a closed surface in R^3");
    AlexandrovReport a;
    double vol = signed_volume(mesh);
    if (vol < 0.0) {
        vol = signed_volume(flip_orientation(mesh));
        a.flipped = true;
    }
    if (!(vol >= 1e-12)) {
        throw NegativeVolume("enclosed volume " + std::to_string(vol) + " is not positive after reorientation");
    }
    const Eigen::VectorXd& area = packet.vertex_area;
    const double total = integrate(area, [](Eigen::Index) { return 1.0; });
    // The normal in `packet` is inner for positive volume; flip it with the mesh.
    const Eigen::VectorXd h = (a.flipped ? -1.0 : 1.0) *
                              (packet.mean_curvature_vec.array() * packet.unit_normal->array()).rowwise().sum();
    a.enclosed_volume = vol;
    a.h0 = 2.0 * total / (3.0 * vol);
    a.delta2 = std::sqrt(integrate(area, [&](Eigen::Index i) { return std::pow(h[i] / a.h0 - 1.0, 2); }) / total);
    a.rescale_factor = std::sqrt(4.0 * kPi / total);
    return a;
}

RescalingCheck rescaling_lemma_check(const SurfaceMesh& mesh, double v_bound)
{
    constexpr double kRounding = 1e-9;
    const CurvaturePacket packet = compute_curvature(mesh);
    const AlexandrovReport alex = alexandrov_report(mesh, packet);
    if (std::abs(alex.h0 - 2.0) > 0.02) {
        throw PreconditionUnmet("h0 = " + std::to_string(alex.h0) + " is not normalized to 2");
    }
    const double area = packet.vertex_area.sum();
    if (area > v_bound * (1.0 + kRounding)) {
        throw PreconditionUnmet("area " + std::to_string(area) + " exceeds V = " + std::to_string(v_bound));
    }

    const SurfaceMesh scaled = scale_mesh(alex.flipped ? flip_orientation(mesh) : mesh, alex.rescale_factor);
    const CurvaturePacket sp = compute_curvature(scaled);
    const Eigen::VectorXd h = scalar_mean_curvature(scaled, sp);
    const Eigen::VectorXd& sa = sp.vertex_area;

    RescalingCheck c;
    c.delta2 = alex.delta2;
    c.scaled_area = integrate(sa, [](Eigen::Index) { return 1.0; });
    const double hbar = integrate(sa, [&](Eigen::Index i) { return h[i]; }) / c.scaled_area;
    c.deficit_l2 = integrate(sa, [&](Eigen::Index i) { return std::pow(h[i] - hbar, 2); });
    c.scalar_h_sq = integrate(sa, [&](Eigen::Index i) { return h[i] * h[i]; });
    c.willmore_raw = integrate(sa, [&](Eigen::Index i) { return sp.mean_curvature_vec.row(i).squaredNorm(); });
    c.deficit_bound = 4.0 * v_bound * alex.delta2 * alex.delta2;
    c.willmore_bound = 4.0 * std::pow(1.0 + alex.delta2, 2) * v_bound;

    c.area_ok = std::abs(c.scaled_area - 4.0 * kPi) <= kRounding * 4.0 * kPi;
    c.deficit_ok = c.deficit_l2 <= c.deficit_bound * (1.0 + kRounding) + 1e-15;
    c.willmore_ok = c.scalar_h_sq <= c.willmore_bound * (1.0 + kRounding);
    return c;
}

double mean_lower_bound(double epsilon)
{
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - epsilon * epsilon / (16.0 * kPi)));
}

bool mean_lower_bound_check(const EnergyReport& report, double epsilon)
{
    if (!report.mean_scalar || !report.deficit_l2) {
        throw PreconditionUnmet("mean scalar curvature is only defined for closed surfaces in R^3");
    }
    if (std::abs(report.area - 4.0 * kPi) > 0.005 * 4.0 * kPi) {
        throw PreconditionUnmet("area " + std::to_string(report.area) + " is not normalized to 4 pi");
    }
    if (*report.deficit_l2 > epsilon * epsilon) {
        throw PreconditionUnmet("int |H - Hbar|^2 exceeds eps^2");
    }
    constexpr double kDiscreteAllowance = 0.02;
    return *report.mean_scalar >= mean_lower_bound(epsilon) - kDiscreteAllowance;
}

} // namespace cmclab
