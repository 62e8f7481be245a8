#include <cmclab/clip.hpp>
#include <cmclab/density.hpp>
#include <cmclab/errors.hpp>
#include <cmclab/generators.hpp>
#include <cmclab/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace cmclab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_radius(double r)
{
    if (!(r > 0.0) || !std::isfinite(r)) throw NonPositiveRadius("radius must be positive, got " + std::to_string(r));
}

} // namespace

// Orthonormal in-plane frame of each triangle plus its bounding sphere.
struct BallIntegrator::Frames
{
    int dim = 0;
    Positions origin; // corner a
    Positions e1;
    Positions e2;
    Eigen::VectorXd lu; // |b - a|
    Eigen::VectorXd c1; // (c - a) . e1
    Eigen::VectorXd c2; // (c - a) . e2
    Eigen::VectorXd area;
    Positions centroid;
    Eigen::VectorXd bound_radius;
    double total_area = 0.0;
};

BallIntegrator::BallIntegrator(const SurfaceMesh& mesh)
    : m_frames(std::make_unique<Frames>())
{
    Frames& f = *m_frames;
    const auto nt = static_cast<Eigen::Index>(mesh.num_triangles());
    f.dim = mesh.ambient_dim();
    f.origin.resize(nt, f.dim);
    f.e1.resize(nt, f.dim);
    f.e2.resize(nt, f.dim);
    f.centroid.resize(nt, f.dim);
    f.lu.resize(nt);
    f.c1.resize(nt);
    f.c2.resize(nt);
    f.area.resize(nt);
    f.bound_radius.resize(nt);
    const auto& v = mesh.vertices();
    for (Eigen::Index t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
        const Eigen::RowVectorXd a = v.row(tri[0]);
        const Eigen::RowVectorXd u = v.row(tri[1]) - a;
        Eigen::RowVectorXd w = v.row(tri[2]) - a;
        f.lu[t] = u.norm();
        f.e1.row(t) = u / f.lu[t];
        f.c1[t] = w.dot(f.e1.row(t));
        w -= f.c1[t] * f.e1.row(t);
        f.c2[t] = w.norm();
        f.e2.row(t) = w / f.c2[t];
        f.origin.row(t) = a;
        f.area[t] = 0.5 * f.lu[t] * f.c2[t];
        const Eigen::RowVectorXd g = (v.row(tri[0]) + v.row(tri[1]) + v.row(tri[2])) / 3.0;
        f.centroid.row(t) = g;
        double rad = 0.0;
        for (int k = 0; k < 3; ++k) rad = std::max(rad, (v.row(tri[k]) - g).norm());
        f.bound_radius[t] = rad;
    }
    std::vector<double> areas(f.area.data(), f.area.data() + f.area.size());
    f.total_area = pairwise_sum(areas);
}

BallIntegrator::~BallIntegrator() = default;
BallIntegrator::BallIntegrator(BallIntegrator&&) noexcept = default;
BallIntegrator& BallIntegrator::operator=(BallIntegrator&&) noexcept = default;

double BallIntegrator::total_area() const { return m_frames->total_area; }
std::size_t BallIntegrator::num_triangles() const { return static_cast<std::size_t>(m_frames->area.size()); }

double BallIntegrator::clip(std::size_t t_index, const Eigen::VectorXd& center, double r) const
{
    const Frames& f = *m_frames;
    const auto t = static_cast<Eigen::Index>(t_index);
    double x1 = 0.0, x2 = 0.0, xx = 0.0;
    for (int k = 0; k < f.dim; ++k) {
        const double x = center[k] - f.origin(t, k);
        x1 += x * f.e1(t, k);
        x2 += x * f.e2(t, k);
        xx += x * x;
    }
    const double d_sq = std::max(0.0, xx - x1 * x1 - x2 * x2);
    const double rho_sq = r * r - d_sq;
    if (rho_sq <= 0.0) return 0.0;
    return triangle_disk_area(Eigen::Vector2d(-x1, -x2), Eigen::Vector2d(f.lu[t] - x1, -x2),
                              Eigen::Vector2d(f.c1[t] - x1, f.c2[t] - x2), std::sqrt(rho_sq));
}

Eigen::VectorXd BallIntegrator::clipped_areas(const Eigen::VectorXd& center, double r) const
{
    require_positive_radius(r);
    const Frames& f = *m_frames;
    Eigen::VectorXd out(f.area.size());
    for (Eigen::Index t = 0; t < f.area.size(); ++t) {
        const double dist = (f.centroid.row(t) - center.transpose()).norm();
        if (dist - f.bound_radius[t] > r) {
            out[t] = 0.0;
        } else if (dist + f.bound_radius[t] <= r) {
            out[t] = f.area[t];
        } else {
            out[t] = clip(static_cast<std::size_t>(t), center, r);
        }
    }
    return out;
}

double BallIntegrator::mass(const Eigen::VectorXd& center, double r) const
{
    const Eigen::VectorXd clipped = clipped_areas(center, r);
    std::vector<double> parts(clipped.data(), clipped.data() + clipped.size());
    return pairwise_sum(parts);
}

double BallIntegrator::weighted(const Eigen::VectorXd& center, double r, const Eigen::VectorXd& triangle_weights) const
{
    const Eigen::VectorXd clipped = clipped_areas(center, r);
    std::vector<double> parts(static_cast<std::size_t>(clipped.size()));
    for (Eigen::Index t = 0; t < clipped.size(); ++t) parts[static_cast<std::size_t>(t)] = clipped[t] * triangle_weights[t];
    return pairwise_sum(parts);
}

BallIntegrator::Profile BallIntegrator::profile(const Eigen::VectorXd& center) const
{
    return profile(center, Eigen::VectorXd::Ones(m_frames->area.size()));
}

BallIntegrator::Profile BallIntegrator::profile(const Eigen::VectorXd& center, const Eigen::VectorXd& weights) const
{
    const Frames& f = *m_frames;
    const auto nt = static_cast<std::size_t>(f.area.size());
    Profile p;
    p.m_owner = this;
    p.m_center = center;
    p.m_weights = weights;
    std::vector<double> inner(nt);
    p.m_outer.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto ti = static_cast<Eigen::Index>(t);
        const double dist = (f.centroid.row(ti) - center.transpose()).norm();
        inner[t] = std::max(0.0, dist - f.bound_radius[ti]);
        p.m_outer[t] = dist + f.bound_radius[ti];
    }
    p.m_by_inner.resize(nt);
    std::iota(p.m_by_inner.begin(), p.m_by_inner.end(), 0);
    std::sort(p.m_by_inner.begin(), p.m_by_inner.end(),
              [&](int a, int b) { return inner[a] < inner[b] || (inner[a] == inner[b] && a < b); });
    p.m_inner.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) p.m_inner[k] = inner[static_cast<std::size_t>(p.m_by_inner[k])];

    std::vector<int> by_outer(nt);
    std::iota(by_outer.begin(), by_outer.end(), 0);
    std::sort(by_outer.begin(), by_outer.end(), [&](int a, int b) {
        return p.m_outer[a] < p.m_outer[b] || (p.m_outer[a] == p.m_outer[b] && a < b);
    });
    p.m_outer_sorted.resize(nt);
    p.m_full_prefix.assign(nt + 1, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        const int t = by_outer[k];
        p.m_outer_sorted[k] = p.m_outer[static_cast<std::size_t>(t)];
        p.m_full_prefix[k + 1] = p.m_full_prefix[k] + weights[t] * f.area[t];
    }
    return p;
}

double BallIntegrator::Profile::operator()(double r) const
{
    require_positive_radius(r);
    // Triangles with outer bound <= r lie inside the closed ball.
    const auto full_count = static_cast<std::size_t>(
        std::upper_bound(m_outer_sorted.begin(), m_outer_sorted.end(), r) - m_outer_sorted.begin());
    double sum = m_full_prefix[full_count];
    for (std::size_t k = 0; k < m_by_inner.size() && m_inner[k] <= r; ++k) {
        const int t = m_by_inner[k];
        if (m_outer[static_cast<std::size_t>(t)] <= r) continue;
        sum += m_weights[t] * m_owner->clip(static_cast<std::size_t>(t), m_center, r);
    }
    return sum;
}

Eigen::VectorXd vertex_density_to_triangle_weights(const SurfaceMesh& mesh, const Eigen::VectorXd& vertex_area,
                                                   const Eigen::VectorXd& density)
{
    Eigen::VectorXd incident = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const double a = mesh.triangle_area(t);
        for (int v : mesh.triangles()[t]) incident[v] += a;
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(mesh.num_triangles()));
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        double s = 0.0;
        for (int v : mesh.triangles()[t]) s += density[v] * vertex_area[v] / incident[v];
        w[static_cast<Eigen::Index>(t)] = s;
    }
    return w;
}

double ball_mass(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r)
{
    require_positive_radius(r);
    return BallIntegrator(mesh).mass(center, r);
}

double ball_mass_complement(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r)
{
    require_positive_radius(r);
    const BallIntegrator balls(mesh);
    const Eigen::VectorXd clipped = balls.clipped_areas(center, r);
    std::vector<double> parts(static_cast<std::size_t>(clipped.size()));
    for (std::size_t t = 0; t < parts.size(); ++t) {
        parts[t] = mesh.triangle_area(t) - clipped[static_cast<Eigen::Index>(t)];
    }
    return pairwise_sum(parts);
}

double density_ratio(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r)
{
    return ball_mass(mesh, center, r) / (kPi * r * r);
}

DensityProfile density_profile(const SurfaceMesh& mesh, int basepoint, const std::vector<double>& radii)
{
    if (basepoint < 0 || static_cast<std::size_t>(basepoint) >= mesh.num_vertices()) {
        throw BadSample("basepoint out of range");
    }
    const BallIntegrator balls(mesh);
    const auto prof = balls.profile(mesh.vertex(static_cast<std::size_t>(basepoint)));
    DensityProfile out;
    out.basepoint = basepoint;
    out.radii = radii;
    std::sort(out.radii.begin(), out.radii.end());
    for (double r : out.radii) {
        const double m = prof(r);
        out.masses.push_back(m);
        out.ratios.push_back(m / (kPi * r * r));
    }
    return out;
}

std::vector<double> geometric_grid(double lo, double hi, int count)
{
    std::vector<double> g;
    if (count == 1) return {hi};
    const double ratio = std::log(hi / lo);
    for (int k = 0; k < count; ++k) g.push_back(lo * std::exp(ratio * k / (count - 1)));
    g.back() = hi;
    return g;
}

double sup_radius(const std::function<bool(double)>& ok, double r_max, const RadiusSearch& search)
{
    const std::vector<double> grid = geometric_grid(r_max * search.grid_floor_ratio, r_max, search.grid_points);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (ok(grid[k])) continue;
        double lo = k == 0 ? 0.0 : grid[k - 1];
        double hi = grid[k];
        for (int s = 0; s < search.bisection_steps; ++s) {
            const double mid = 0.5 * (lo + hi);
            if (ok(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
    return r_max;
}

double nonconcentration_radius(const BallIntegrator& balls, const Eigen::VectorXd& center, double gamma,
                               double r_max, const RadiusSearch& search)
{
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidGamma("gamma must lie in (0, 1)");
    require_positive_radius(r_max);
    const auto prof = balls.profile(center);
    const double threshold = 2.0 * (1.0 - gamma);
    return sup_radius([&](double r) { return prof(r) / (kPi * r * r) <= threshold; }, r_max, search);
}

double nonconcentration_radius(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double gamma, double r_max,
                               const RadiusSearch& search)
{
    return nonconcentration_radius(BallIntegrator(mesh), center, gamma, r_max, search);
}

double total_curvature_radius(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center,
                              double epsilon_tc, double sigma, const RadiusSearch& search)
{
    if (!(epsilon_tc > 0.0)) throw NonPositiveRadius("epsilon_tc must be positive");
    require_positive_radius(sigma);
    const BallIntegrator balls(mesh);
    const auto prof =
        balls.profile(center, vertex_density_to_triangle_weights(mesh, packet.vertex_area, packet.sff_density));
    return sup_radius([&](double r) { return prof(r) <= epsilon_tc; }, sigma, search);
}

double total_curvature_sigma(double gamma) { return gamma / (20.0 * (1.0 - gamma) + gamma); }

RadiiReport radii_report(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center,
                         double gamma, double epsilon_tc, double r_max)
{
    RadiiReport r;
    r.gamma = gamma;
    r.epsilon_tc = epsilon_tc;
    r.sigma = total_curvature_sigma(gamma);
    r.r_D = nonconcentration_radius(mesh, center, gamma, r_max);
    r.r_eps = total_curvature_radius(mesh, packet, center, epsilon_tc, r.sigma);
    return r;
}

double ball_willmore(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center, double r)
{
    require_positive_radius(r);
    const Eigen::VectorXd h2 = packet.mean_curvature_vec.rowwise().squaredNorm();
    return BallIntegrator(mesh).weighted(center, r, vertex_density_to_triangle_weights(mesh, packet.vertex_area, h2));
}

double monotonicity_constant(double delta)
{
    if (!(delta > 0.0)) throw BadSample("delta must be positive");
    return 3.0 / 16.0 + 1.0 / (4.0 * delta);
}

std::vector<MonotonicityEvaluation> evaluate_monotonicity(const SurfaceMesh& mesh, const CurvaturePacket& packet,
                                                          const std::vector<MonotonicitySample>& samples,
                                                          double delta, double allowance)
{
    const double c_delta = monotonicity_constant(delta);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.r > 0.0) || !(s.a >= s.r) || s.center.size() != mesh.ambient_dim()) {
            throw BadSample("sample " + std::to_string(i) + " needs 0 < r <= a and a center in R^n");
        }
    }
    const BallIntegrator balls(mesh);
    const Eigen::VectorXd h2 = packet.mean_curvature_vec.rowwise().squaredNorm();
    const Eigen::VectorXd weights = vertex_density_to_triangle_weights(mesh, packet.vertex_area, h2);

    std::vector<MonotonicityEvaluation> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        MonotonicityEvaluation e;
        e.index = i;
        e.lhs = balls.mass(s.center, s.r) / (s.r * s.r);
        e.rhs = (1.0 + delta) * balls.mass(s.center, s.a) / (s.a * s.a) + c_delta * balls.weighted(s.center, s.a, weights);
        e.violated = e.lhs > e.rhs * (1.0 + allowance);
        out.push_back(e);
    }
    return out;
}

std::vector<MonotonicityEvaluation> monotonicity_audit(const SurfaceMesh& mesh, const CurvaturePacket& packet,
                                                       const std::vector<MonotonicitySample>& samples, double delta,
                                                       double allowance)
{
    std::vector<MonotonicityEvaluation> violations;
    for (const auto& e : evaluate_monotonicity(mesh, packet, samples, delta, allowance)) {
        if (e.violated) violations.push_back(e);
    }
    return violations;
}

std::vector<MonotonicitySample> random_monotonicity_samples(const SurfaceMesh& mesh, std::size_t count,
                                                            std::uint64_t seed, double a_min, double a_max)
{
    if (!(a_min > 0.0 && a_max >= a_min)) throw BadSample("need 0 < a_min <= a_max");
    std::vector<double> cdf(mesh.num_triangles());
    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) cdf[t] = (acc += mesh.triangle_area(t));
    SeededUniform rng(seed);
    std::vector<MonotonicitySample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = rng.next() * acc;
        const auto t = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin()), cdf.size() - 1);
        const double s = std::sqrt(rng.next());
        const double u = rng.next();
        const auto& tri = mesh.triangles()[t];
        MonotonicitySample m;
        m.center = (1.0 - s) * mesh.vertex(tri[0]) + s * (1.0 - u) * mesh.vertex(tri[1]) + s * u * mesh.vertex(tri[2]);
        m.a = a_min * std::pow(a_max / a_min, rng.next());
        m.r = m.a * std::pow(0.01, rng.next());
        out.push_back(std::move(m));
    }
    return out;
}

LemmaConstants lemma_constants(double gamma, double W)
{
    if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidGamma("gamma must lie in (0, 1/2)");
    if (!(W > 0.0)) throw NonPositiveW("W must be positive");
    const double denom = 32.0 * kPi * (1.0 - gamma) + 7.0;
    return {8.0 * kPi * gamma / denom, 4.0 * kPi * gamma / (denom * W)};
}

std::vector<int> farthest_point_samples(const SurfaceMesh& mesh, std::size_t count)
{
    const auto nv = static_cast<Eigen::Index>(mesh.num_vertices());
    count = std::min<std::size_t>(count, static_cast<std::size_t>(nv));
    std::vector<int> picked;
    if (count == 0) return picked;
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(nv, std::numeric_limits<double>::infinity());
    int next = 0;
    while (picked.size() < count) {
        picked.push_back(next);
        const Eigen::RowVectorXd p = mesh.vertices().row(next);
        for (Eigen::Index i = 0; i < nv; ++i) dist[i] = std::min(dist[i], (mesh.vertices().row(i) - p).squaredNorm());
        Eigen::Index arg = 0;
        dist.maxCoeff(&arg);
        next = static_cast<int>(arg);
    }
    return picked;
}

double local_willmore_profile(const SurfaceMesh& mesh, const CurvaturePacket& packet, double r, int sample_count)
{
    require_positive_radius(r);
    if (sample_count < 1) throw BadSample("sample_count must be at least 1");
    const BallIntegrator balls(mesh);
    const Eigen::VectorXd h2 = packet.mean_curvature_vec.rowwise().squaredNorm();
    const Eigen::VectorXd weights = vertex_density_to_triangle_weights(mesh, packet.vertex_area, h2);
    double best = 0.0;
    for (int v : farthest_point_samples(mesh, static_cast<std::size_t>(sample_count))) {
        best = std::max(best, balls.weighted(mesh.vertex(static_cast<std::size_t>(v)), r, weights));
    }
    return best;
}

LocalWillmoreCheck local_willmore_bound_check(const SurfaceMesh& mesh, const CurvaturePacket& packet, double epsilon,
                                              double W, double gamma, int sample_count, int radii)
{
    const LemmaConstants k = lemma_constants(gamma, W);
    const Eigen::VectorXd& area = packet.vertex_area;
    const double total = area.sum();
    if (std::abs(total - 4.0 * kPi) > 0.005 * 4.0 * kPi) {
        throw PreconditionUnmet("area " + std::to_string(total) + " is not normalized to 4 pi");
    }
    const Eigen::VectorXd abs_h = packet.mean_curvature_vec.rowwise().norm();
    const double mean_abs = area.dot(abs_h) / total;
    const double deficit = area.dot((abs_h.array() - mean_abs).square().matrix());
    if (!(epsilon > 0.0) || epsilon > k.epsilon_gamma) {
        throw PreconditionUnmet("epsilon must lie in (0, epsilon(gamma)] = (0, " + std::to_string(k.epsilon_gamma) + "]");
    }
    if (deficit > epsilon * epsilon) {
        throw PreconditionUnmet("int ||H| - avg|H||^2 = " + std::to_string(deficit) + " exceeds eps^2");
    }

    const BallIntegrator balls(mesh);
    const Eigen::VectorXd weights =
        vertex_density_to_triangle_weights(mesh, area, packet.mean_curvature_vec.rowwise().squaredNorm());
    LocalWillmoreCheck out;
    out.a = k.a_gamma_w;
    out.epsilon_gamma = k.epsilon_gamma;
    for (int v : farthest_point_samples(mesh, static_cast<std::size_t>(sample_count))) {
        const auto prof = balls.profile(mesh.vertex(static_cast<std::size_t>(v)), weights);
        for (int j = 1; j <= radii; ++j) {
            const double r = k.a_gamma_w * j / radii;
            const double rhs = 2.0 * epsilon * epsilon + 16.0 * W * W / kPi * r * r;
            out.worst_ratio = std::max(out.worst_ratio, prof(r) / rhs);
        }
    }
    out.holds = out.worst_ratio <= 1.05;
    return out;
}

} // namespace cmclab
