#include <cmclab/errors.hpp>
#include <cmclab/generators.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace cmclab {

namespace {

constexpr double kPi = std::numbers::pi;

struct IndexedMesh
{
    std::vector<Eigen::Vector3d> points;
    std::vector<Triangle> triangles;

    SurfaceMesh build() const
    {
        Positions p(static_cast<Eigen::Index>(points.size()), 3);
        for (std::size_t i = 0; i < points.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
        return SurfaceMesh(std::move(p), triangles);
    }
};

// Icosahedron with vertices at both poles and two staggered rings of five.
IndexedMesh unit_icosahedron()
{
    IndexedMesh m;
    const double z = 1.0 / std::sqrt(5.0);
    const double r = 2.0 / std::sqrt(5.0);
    m.points.emplace_back(0.0, 0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        const double a = 2.0 * kPi * k / 5.0;
        m.points.emplace_back(r * std::cos(a), r * std::sin(a), z);
    }
    for (int k = 0; k < 5; ++k) {
        const double a = 2.0 * kPi * k / 5.0 + kPi / 5.0;
        m.points.emplace_back(r * std::cos(a), r * std::sin(a), -z);
    }
    m.points.emplace_back(0.0, 0.0, -1.0);
    auto up = [](int k) { return 1 + (k % 5); };
    auto lo = [](int k) { return 6 + (k % 5); };
    for (int k = 0; k < 5; ++k) {
        m.triangles.push_back({0, up(k), up(k + 1)});
        m.triangles.push_back({up(k), lo(k), up(k + 1)});
        m.triangles.push_back({up(k + 1), lo(k), lo(k + 1)});
        m.triangles.push_back({11, lo(k + 1), lo(k)});
    }
    return m;
}

IndexedMesh subdivide_on_sphere(const IndexedMesh& in)
{
    IndexedMesh out;
    out.points = in.points;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        const auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.points.size());
        out.points.push_back((in.points[a] + in.points[b]).normalized());
        midpoint.emplace(key, idx);
        return idx;
    };
    for (const auto& t : in.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

IndexedMesh unit_icosphere(int subdiv)
{
    IndexedMesh m = unit_icosahedron();
    for (int s = 0; s < subdiv; ++s) m = subdivide_on_sphere(m);
    return m;
}

double perturbation_field(const Eigen::Vector3d& x, const std::vector<Eigen::Vector3d>& dirs,
                          const std::vector<double>& phases, double frequency)
{
    double f = 0.0;
    for (std::size_t k = 0; k < dirs.size(); ++k) f += std::cos(frequency * dirs[k].dot(x) + phases[k]);
    return f / static_cast<double>(dirs.size());
}

SurfaceMesh perturbed_sphere(const GeneratorSpec& spec)
{
    SeededUniform rng(spec.seed);
    std::vector<Eigen::Vector3d> dirs;
    std::vector<double> phases;
    for (int k = 0; k < spec.bumps; ++k) {
        const double z = 2.0 * rng.next() - 1.0;
        const double a = 2.0 * kPi * rng.next();
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        dirs.emplace_back(s * std::cos(a), s * std::sin(a), z);
        phases.push_back(2.0 * kPi * rng.next());
    }
    IndexedMesh m = unit_icosphere(spec.subdiv);
    for (auto& p : m.points) p *= 1.0 + spec.amplitude * perturbation_field(p, dirs, phases, spec.frequency);
    SurfaceMesh mesh = m.build();
    if (spec.normalize_area) mesh = scale_mesh(mesh, std::sqrt(4.0 * kPi / mesh.total_area()));
    return mesh;
}

// Grid over the flat torus [0, 2pi)^2 mapped by `embed`.
template <typename Embed>
SurfaceMesh torus_grid(int nu, int nv, int dim, Embed embed)
{
    Positions p(static_cast<Eigen::Index>(nu) * nv, dim);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const double u = 2.0 * kPi * i / nu;
            const double v = 2.0 * kPi * j / nv;
            p.row(static_cast<Eigen::Index>(i) * nv + j) = embed(u, v).transpose();
        }
    }
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(2 * nu * nv));
    auto idx = [&](int i, int j) { return ((i % nu) * nv) + (j % nv); };
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            tris.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            tris.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    }
    return SurfaceMesh(std::move(p), std::move(tris));
}

// Meridian profile of the bubbling pair parametrized by arc length from the
// top pole: upper sphere, catenoid, lower sphere.
struct BubblingProfile
{
    BubblingGeometry g;
    double sphere_arc = 0.0;   // pole to junction along a sphere
    double catenoid_arc = 0.0; // junction to junction along the catenoid

    double length() const { return 2.0 * sphere_arc + catenoid_arc; }

    // (rho, z) at arc length s.
    std::pair<double, double> at(double s) const
    {
        const double t = g.neck;
        if (s <= sphere_arc) return {std::sin(s), g.center_offset + std::cos(s)};
        if (s <= sphere_arc + catenoid_arc) {
            const double sigma = s - sphere_arc - 0.5 * catenoid_arc;
            return {std::sqrt(t * t + sigma * sigma), -t * std::asinh(sigma / t)};
        }
        const double phi = std::max(0.0, length() - s);
        return {std::sin(phi), -(g.center_offset + std::cos(phi))};
    }

    // Rings per unit arc length: uniform near the poles, conformal spacing
    // (proportional to the ring radius) from each equator into the neck.
    double ring_density(double s, int segments) const
    {
        const double base = segments / (2.0 * kPi);
        const double L = length();
        const double phi = s <= 0.5 * L ? s : L - s;
        const bool pole_side = phi < 0.5 * kPi;
        if (pole_side) return base;
        const double rho = at(s).first;
        return std::max(base, segments / (2.0 * kPi * rho));
    }
};

BubblingProfile bubbling_profile(double neck)
{
    BubblingProfile p;
    p.g = bubbling_geometry(neck);
    p.sphere_arc = std::acos(-std::sqrt(1.0 - neck));
    p.catenoid_arc = 2.0 * neck * std::sinh(p.g.junction_z / neck);
    return p;
}

SurfaceMesh bubbling_pair(double neck, int subdiv)
{
    const int segments = bubbling_ring_segments(subdiv);
    const BubblingProfile prof = bubbling_profile(neck);
    const double L = prof.length();

    // Cumulative ring count along the profile, then invert at integers.
    constexpr int kQuad = 200000;
    std::vector<double> cumulative(kQuad + 1, 0.0);
    const double ds = L / kQuad;
    double prev = prof.ring_density(0.0, segments);
    for (int q = 1; q <= kQuad; ++q) {
        const double cur = prof.ring_density(q * ds, segments);
        cumulative[q] = cumulative[q - 1] + 0.5 * (prev + cur) * ds;
        prev = cur;
    }
    const int intervals = std::max(4, static_cast<int>(std::lround(cumulative.back())));
    const double scale = cumulative.back() / intervals;

    std::vector<double> ring_s;
    for (int k = 1; k < intervals; ++k) {
        const double target = k * scale;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
        const auto q = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
        const double c0 = cumulative[q - 1];
        const double c1 = cumulative[q];
        const double frac = (target - c0) / (c1 - c0);
        ring_s.push_back((static_cast<double>(q - 1) + frac) * ds);
    }

    IndexedMesh m;
    m.points.emplace_back(0.0, 0.0, prof.g.center_offset + 1.0);
    for (std::size_t k = 0; k < ring_s.size(); ++k) {
        const auto [rho, z] = prof.at(ring_s[k]);
        const double offset = (k % 2) ? 0.5 : 0.0;
        for (int j = 0; j < segments; ++j) {
            const double theta = 2.0 * kPi * (j + offset) / segments;
            m.points.emplace_back(rho * std::cos(theta), rho * std::sin(theta), z);
        }
    }
    const int bottom = static_cast<int>(m.points.size());
    m.points.emplace_back(0.0, 0.0, -(prof.g.center_offset + 1.0));

    const int rings = static_cast<int>(ring_s.size());
    auto at = [&](int ring, int j) { return 1 + ring * segments + ((j % segments) + segments) % segments; };
    for (int j = 0; j < segments; ++j) m.triangles.push_back({0, at(0, j), at(0, j + 1)});
    for (int k = 0; k + 1 < rings; ++k) {
        // Rings alternate a half-step rotation. (A, B_left, B_right) and
        // (A_left, B, A_right) are the two outward-oriented triangle shapes.
        for (int j = 0; j < segments; ++j) {
            if (k % 2 == 0) {
                m.triangles.push_back({at(k, j), at(k + 1, j), at(k, j + 1)});
                m.triangles.push_back({at(k, j + 1), at(k + 1, j), at(k + 1, j + 1)});
            } else {
                m.triangles.push_back({at(k, j), at(k + 1, j + 1), at(k, j + 1)});
                m.triangles.push_back({at(k, j), at(k + 1, j), at(k + 1, j + 1)});
            }
        }
    }
    for (int j = 0; j < segments; ++j) m.triangles.push_back({bottom, at(rings - 1, j + 1), at(rings - 1, j)});
    return m.build();
}

} // namespace

std::string to_string(GeneratorKind kind)
{
    switch (kind) {
    case GeneratorKind::Icosphere: return "Icosphere";
    case GeneratorKind::PerturbedSphere: return "PerturbedSphere";
    case GeneratorKind::BubblingPair: return "BubblingPair";
    case GeneratorKind::CliffordTorus: return "CliffordTorus";
    case GeneratorKind::Ellipsoid: return "Ellipsoid";
    case GeneratorKind::TorusOfRevolution: return "TorusOfRevolution";
    }
    return "?";
}

GeneratorKind generator_kind_from_string(const std::string& name)
{
    for (auto k : {GeneratorKind::Icosphere, GeneratorKind::PerturbedSphere, GeneratorKind::BubblingPair,
                   GeneratorKind::CliffordTorus, GeneratorKind::Ellipsoid, GeneratorKind::TorusOfRevolution}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidSpec("unknown generator kind '" + name + "'");
}

BubblingGeometry bubbling_geometry(double neck)
{
    if (!(neck > 0.0 && neck < 0.5)) {
        throw InvalidSpec("neck radius must lie in (0, 0.5), got " + std::to_string(neck));
    }
    BubblingGeometry g;
    g.neck = neck;
    g.junction_z = neck * std::acosh(1.0 / std::sqrt(neck));
    g.junction_radius = std::sqrt(neck);
    g.center_offset = g.junction_z + std::sqrt(1.0 - neck);
    g.smooth_willmore_raw = 32.0 * kPi - 16.0 * kPi * (1.0 - std::sqrt(1.0 - neck));
    return g;
}

int bubbling_ring_segments(int subdiv) { return 4 << std::max(0, subdiv); }

SurfaceMesh make_icosphere(int subdiv, double radius)
{
    if (subdiv < 0 || subdiv > 8) throw InvalidSpec("icosphere subdivision must be in [0, 8]");
    if (!(radius > 0.0)) throw InvalidSpec("radius must be positive");
    IndexedMesh m = unit_icosphere(subdiv);
    for (auto& p : m.points) p *= radius;
    return m.build();
}

SurfaceMesh make_tangent_spheres(int subdiv)
{
    const SurfaceMesh s = make_icosphere(subdiv);
    return disjoint_union(
        translate_mesh(s, Eigen::Vector3d(0.0, 0.0, 1.0)), translate_mesh(s, Eigen::Vector3d(0.0, 0.0, -1.0)));
}

std::vector<int> neck_region_vertices(const SurfaceMesh& mesh, double neck)
{
    const BubblingGeometry g = bubbling_geometry(neck);
    std::vector<int> out;
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
        if (std::abs(mesh.vertices()(static_cast<Eigen::Index>(i), 2)) <= g.junction_z * (1.0 + 1e-9)) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

SurfaceMesh generate(const GeneratorSpec& spec)
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidSpec(std::string(name) + " must be positive");
    };
    if (spec.subdiv < 0 || spec.subdiv > 8) throw InvalidSpec("subdiv must be in [0, 8]");

    SurfaceMesh mesh = [&]() -> SurfaceMesh {
        switch (spec.kind) {
        case GeneratorKind::Icosphere:
            positive(spec.radius, "radius");
            return make_icosphere(spec.subdiv, spec.radius);
        case GeneratorKind::PerturbedSphere:
            if (!(spec.amplitude >= 0.0 && spec.amplitude < 0.5)) throw InvalidSpec("amplitude must lie in [0, 0.5)");
            positive(spec.frequency, "frequency");
            if (spec.bumps < 1) throw InvalidSpec("bumps must be at least 1");
            return perturbed_sphere(spec);
        case GeneratorKind::BubblingPair:
            return bubbling_pair(spec.neck_radius, spec.subdiv);
        case GeneratorKind::CliffordTorus:
            if (spec.grid_u < 3 || spec.grid_v < 3) throw InvalidSpec("torus grids need at least 3 cells per side");
            return torus_grid(spec.grid_u, spec.grid_v, 4, [](double u, double v) -> Eigen::VectorXd {
                return Eigen::Vector4d(std::cos(u), std::sin(u), std::cos(v), std::sin(v)) / std::sqrt(2.0);
            });
        case GeneratorKind::Ellipsoid: {
            for (double a : spec.axes) positive(a, "ellipsoid axis");
            const SurfaceMesh s = make_icosphere(spec.subdiv);
            Positions p = s.vertices();
            for (int k = 0; k < 3; ++k) p.col(k) *= spec.axes[static_cast<std::size_t>(k)];
            return SurfaceMesh(std::move(p), s.triangles());
        }
        case GeneratorKind::TorusOfRevolution: {
            if (spec.grid_u < 3 || spec.grid_v < 3) throw InvalidSpec("torus grids need at least 3 cells per side");
            positive(spec.minor_radius, "minor_radius");
            if (!(spec.major_radius > spec.minor_radius)) throw InvalidSpec("major_radius must exceed minor_radius");
            const double R = spec.major_radius;
            const double r = spec.minor_radius;
            return torus_grid(spec.grid_u, spec.grid_v, 3, [R, r](double u, double v) -> Eigen::VectorXd {
                return Eigen::Vector3d((R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u),
                                       r * std::sin(v));
            });
        }
        }
        throw InvalidSpec("unknown generator kind");
    }();
    require_valid(mesh);
    return mesh;
}

std::vector<std::pair<double, SurfaceMesh>> bubbling_sweep(const std::vector<double>& necks, int subdiv)
{
    for (std::size_t i = 0; i < necks.size(); ++i) {
        if (!(necks[i] > 0.0 && necks[i] < 0.5)) throw InvalidSpec("neck radius must lie in (0, 0.5)");
        if (i > 0 && !(necks[i] < necks[i - 1])) throw InvalidSpec("necks must be strictly descending");
    }
    std::vector<std::pair<double, SurfaceMesh>> out;
    for (double t : necks) {
        GeneratorSpec spec;
        spec.kind = GeneratorKind::BubblingPair;
        spec.neck_radius = t;
        spec.subdiv = subdiv;
        out.emplace_back(t, generate(spec));
    }
    return out;
}

} // namespace cmclab
