#pragma once

#include <cmclab/mesh.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cmclab {

enum class GeneratorKind { Icosphere, PerturbedSphere, BubblingPair, CliffordTorus, Ellipsoid, TorusOfRevolution };

std::string to_string(GeneratorKind kind);
/// Throws InvalidSpec on an unknown name.
GeneratorKind generator_kind_from_string(const std::string& name);

/// Parameters for every surface family. Each kind reads only the fields
/// relevant to it; the rest keep their defaults.
struct GeneratorSpec
{
    GeneratorKind kind = GeneratorKind::Icosphere;

    int subdiv = 4;       // icosphere level; also sets ring resolution of BubblingPair
    double radius = 1.0;  // Icosphere

    // PerturbedSphere: r(x) = 1 + amplitude * mean_k cos(frequency <d_k, x> + phase_k)
    double amplitude = 0.05;
    double frequency = 2.0;
    int bumps = 3;
    bool normalize_area = false; // rescale to area 4 pi
    std::uint64_t seed = 1;

    double neck_radius = 0.1; // BubblingPair catenoid waist, in (0, 0.5)

    std::array<double, 3> axes{1.0, 1.0, 1.3}; // Ellipsoid semi-axes

    int grid_u = 64; // CliffordTorus / TorusOfRevolution
    int grid_v = 64;
    double major_radius = 2.0; // TorusOfRevolution
    double minor_radius = 0.5;
};

/// Deterministic: the same spec yields a bit-identical mesh.
SurfaceMesh generate(const GeneratorSpec& spec);

SurfaceMesh make_icosphere(int subdiv, double radius = 1.0);

/// Two unit spheres meeting at the origin (each touches it with a vertex).
SurfaceMesh make_tangent_spheres(int subdiv);

///
/// Matching data of the bubbling pair: two unit spheres centred at
/// (0, 0, +-center_offset), each missing a polar cap, joined by the catenoid
/// rho(z) = t cosh(z / t) for |z| <= junction_z. Tangency of the catenoid and
/// the sphere at the junction circle gives
///     cosh(junction_z / t) = 1 / sqrt(t),  rho_junction = sqrt(t),
///     center_offset = junction_z + sqrt(1 - t).
///
struct BubblingGeometry
{
    double neck = 0.0;
    double junction_z = 0.0;
    double junction_radius = 0.0;
    double center_offset = 0.0;
    /// Smooth-surface value of int |H|^2: 32 pi - 16 pi (1 - sqrt(1 - t)).
    double smooth_willmore_raw = 0.0;
};

BubblingGeometry bubbling_geometry(double neck);

/// Indices of vertices on the catenoid part of a BubblingPair mesh.
std::vector<int> neck_region_vertices(const SurfaceMesh& mesh, double neck);

/// Number of vertices per ring used by BubblingPair at a given level.
int bubbling_ring_segments(int subdiv);

/// One BubblingPair per neck; necks must be strictly descending in (0, 0.5).
std::vector<std::pair<double, SurfaceMesh>> bubbling_sweep(const std::vector<double>& necks, int subdiv);

/// Uniform double in [0, 1) from the top 53 bits of a std::mt19937_64 draw.
/// The engine output is fixed by the standard, and the conversion avoids the
/// implementation-defined std distributions, so streams match across platforms.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : m_engine(seed) {}
    double next() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 m_engine;
};

} // namespace cmclab
