#pragma once

#include <cmclab/mesh.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace cmclab {

enum class MeshFormat { OBJ, NDMESH };

/// OBJ for ".obj", NDMESH otherwise.
MeshFormat format_from_extension(const std::filesystem::path& path);

/// Reads a closed oriented mesh. Throws ParseError (with line number),
/// DimensionError (OBJ vertex lines that are not 3D) or TopologyError.
SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
SurfaceMesh load_mesh(const std::filesystem::path& path);

SurfaceMesh read_obj(std::istream& in);
SurfaceMesh read_ndmesh(std::istream& in);

/// Coordinates are written as shortest round-trip decimals, so a reload is
/// bit-exact. OBJ requires n = 3 (DimensionError otherwise).
void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path, MeshFormat format);
void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path);

void write_obj(const SurfaceMesh& mesh, std::ostream& out);
void write_ndmesh(const SurfaceMesh& mesh, std::ostream& out);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_roundtrip(double value);

} // namespace cmclab
