#include <cmclab/errors.hpp>
#include <cmclab/mesh_io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace cmclab {

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view strip_comment(std::string_view line)
{
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

double parse_double(std::string_view tok, std::size_t line_no)
{
    double value = 0.0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "invalid number '" + std::string(tok) + "'");
    }
    return value;
}

long long parse_int(std::string_view tok, std::size_t line_no)
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "invalid integer '" + std::string(tok) + "'");
    }
    return value;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

std::string format_roundtrip(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, ptr);
}

MeshFormat format_from_extension(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".obj" ? MeshFormat::OBJ : MeshFormat::NDMESH;
}

SurfaceMesh read_obj(std::istream& in)
{
    std::vector<double> coords;
    std::vector<Triangle> tris;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto toks = split_ws(strip_comment(line));
        if (toks.empty()) continue;
        const auto tag = toks[0];
        if (tag == "v") {
            if (toks.size() != 4) {
                if (toks.size() > 4) {
                    throw DimensionError(
                        "line " + std::to_string(line_no) + ": OBJ vertices must have exactly 3 coordinates");
                }
                throw ParseError(line_no, "vertex line needs 3 coordinates");
            }
            for (int k = 1; k <= 3; ++k) coords.push_back(parse_double(toks[k], line_no));
        } else if (tag == "f") {
            if (toks.size() != 4) throw ParseError(line_no, "only triangular faces are supported");
            Triangle t{};
            const long long nv = static_cast<long long>(coords.size() / 3);
            for (int k = 0; k < 3; ++k) {
                const auto slash = toks[k + 1].find('/');
                long long idx = parse_int(toks[k + 1].substr(0, slash), line_no);
                if (idx < 0) idx = nv + idx + 1; // relative reference
                if (idx < 1 || idx > nv) throw ParseError(line_no, "face index out of range");
                t[k] = static_cast<int>(idx - 1);
            }
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
                throw ParseError(line_no, "face repeats a vertex");
            }
            tris.push_back(t);
        } else if (tag == "vn" || tag == "vt" || tag == "o" || tag == "g" || tag == "s" ||
                   tag == "usemtl" || tag == "mtllib") {
            continue;
        } else {
            throw ParseError(line_no, "unsupported OBJ record '" + std::string(tag) + "'");
        }
    }
    Positions p(static_cast<Eigen::Index>(coords.size() / 3), 3);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (int k = 0; k < 3; ++k) p(i, k) = coords[static_cast<std::size_t>(3 * i + k)];
    }
    SurfaceMesh mesh(std::move(p), std::move(tris));
    require_valid(mesh);
    return mesh;
}

SurfaceMesh read_ndmesh(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;

    auto next_record = [&](std::vector<std::string_view>& toks, std::string& storage) -> bool {
        while (std::getline(in, storage)) {
            ++line_no;
            toks = split_ws(strip_comment(storage));
            if (!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string_view> toks;
    if (!next_record(toks, line)) throw ParseError(line_no + 1, "missing 'ndmesh' header");
    if (toks.size() != 4 || toks[0] != "ndmesh") {
        throw ParseError(line_no, "header must be 'ndmesh <n> <V> <T>'");
    }
    const long long n = parse_int(toks[1], line_no);
    const long long nv = parse_int(toks[2], line_no);
    const long long nt = parse_int(toks[3], line_no);
    if (n < 3) throw DimensionError("line " + std::to_string(line_no) + ": ambient dimension must be >= 3");
    if (nv < 0 || nt < 0) throw ParseError(line_no, "negative element count");

    Positions p(nv, n);
    for (long long i = 0; i < nv; ++i) {
        if (!next_record(toks, line)) throw ParseError(line_no + 1, "unexpected end of file in vertex block");
        if (static_cast<long long>(toks.size()) != n) {
            throw ParseError(line_no, "vertex line needs " + std::to_string(n) + " coordinates");
        }
        for (long long k = 0; k < n; ++k) p(i, k) = parse_double(toks[static_cast<std::size_t>(k)], line_no);
    }
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(nt));
    for (long long t = 0; t < nt; ++t) {
        if (!next_record(toks, line)) throw ParseError(line_no + 1, "unexpected end of file in triangle block");
        if (toks.size() != 3) throw ParseError(line_no, "triangle line needs 3 indices");
        Triangle tri{};
        for (int k = 0; k < 3; ++k) {
            const long long idx = parse_int(toks[k], line_no);
            if (idx < 0 || idx >= nv) throw ParseError(line_no, "triangle index out of range");
            tri[k] = static_cast<int>(idx);
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            throw ParseError(line_no, "triangle repeats a vertex");
        }
        tris.push_back(tri);
    }
    if (next_record(toks, line)) throw ParseError(line_no, "trailing data after triangle block");

    SurfaceMesh mesh(std::move(p), std::move(tris));
    require_valid(mesh);
    return mesh;
}

SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return format == MeshFormat::OBJ ? read_obj(in) : read_ndmesh(in);
}

SurfaceMesh load_mesh(const std::filesystem::path& path)
{
    return load_mesh(path, format_from_extension(path));
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out)
{
    if (mesh.ambient_dim() != 3) {
        throw DimensionError("OBJ carries 3 coordinates; mesh lives in R^" + std::to_string(mesh.ambient_dim()));
    }
    const auto& v = mesh.vertices();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        out << "v " << format_roundtrip(v(i, 0)) << ' ' << format_roundtrip(v(i, 1)) << ' '
            << format_roundtrip(v(i, 2)) << '\n';
    }
    for (const auto& t : mesh.triangles()) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
}

void write_ndmesh(const SurfaceMesh& mesh, std::ostream& out)
{
    out << "ndmesh " << mesh.ambient_dim() << ' ' << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
    const auto& v = mesh.vertices();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index k = 0; k < v.cols(); ++k) {
            if (k) out << ' ';
            out << format_roundtrip(v(i, k));
        }
        out << '\n';
    }
    for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path, MeshFormat format)
{
    if (format == MeshFormat::OBJ && mesh.ambient_dim() != 3) {
        throw DimensionError("OBJ carries 3 coordinates; mesh lives in R^" + std::to_string(mesh.ambient_dim()));
    }
    std::ofstream out = open_for_write(path);
    if (format == MeshFormat::OBJ) {
        write_obj(mesh, out);
    } else {
        write_ndmesh(mesh, out);
    }
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path)
{
    save_mesh(mesh, path, format_from_extension(path));
}

} // namespace cmclab
