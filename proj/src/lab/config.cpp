#include <cmclab/errors.hpp>
#include <cmclab/lab/config.hpp>
#include <cmclab/mesh_io.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace cmclab::lab {

namespace {

struct Entry
{
    std::string section; // "" for top level
    std::string key;
    std::string value;
    std::size_t line = 0;

    std::string path() const { return section.empty() ? key : section + "." + key; }
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<Entry> tokenize(const std::string& text)
{
    std::vector<Entry> out;
    std::set<std::string> seen;
    std::set<std::string> sections_seen;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(std::string_view(raw).substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(s, line, "malformed section header");
            section = trim(std::string_view(s).substr(1, s.size() - 2));
            if (section != "generator" && section != "params") {
                throw ConfigError(section, line, "unknown section");
            }
            if (!sections_seen.insert(section).second) throw ConfigError(section, line, "duplicate section");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, line, "expected key = value");
        Entry e{section, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
        if (e.key.empty()) throw ConfigError("", line, "empty key");
        if (!seen.insert(e.path()).second) throw ConfigError(e.path(), line, "duplicate key");
        out.push_back(std::move(e));
    }
    return out;
}

double to_double(const Entry& e)
{
    double v = 0.0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(e.path(), e.line, "expected a number, got '" + e.value + "'");
    }
    return v;
}

long long to_integer(const Entry& e)
{
    long long v = 0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(e.path(), e.line, "expected an integer, got '" + e.value + "'");
    return v;
}

bool to_bool(const Entry& e)
{
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError(e.path(), e.line, "expected true or false");
}

std::vector<double> to_list(const Entry& e)
{
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(Entry{e.section, e.key, trim(item), e.line}));
    if (out.empty()) throw ConfigError(e.path(), e.line, "expected a comma-separated list");
    return out;
}

void require(bool ok, const Entry& e, const std::string& range)
{
    if (!ok) throw ConfigError(e.path(), e.line, "value " + e.value + " outside " + range);
}

double positive(const Entry& e)
{
    const double v = to_double(e);
    require(v > 0.0, e, "(0, inf)");
    return v;
}

int int_in(const Entry& e, long long lo, long long hi)
{
    const long long v = to_integer(e);
    require(v >= lo && v <= hi, e, "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

void apply_generator(GeneratorSpec& g, const Entry& e)
{
    const std::string& k = e.key;
    if (k == "kind") {
        try {
            g.kind = generator_kind_from_string(e.value);
        } catch (const InvalidSpec&) {
            throw ConfigError(e.path(), e.line, "unknown generator kind '" + e.value + "'");
        }
    } else if (k == "subdiv") {
        g.subdiv = int_in(e, 0, 7);
    } else if (k == "radius") {
        g.radius = positive(e);
    } else if (k == "amplitude") {
        g.amplitude = to_double(e);
        require(g.amplitude >= 0.0 && g.amplitude < 0.5, e, "[0, 0.5)");
    } else if (k == "frequency") {
        g.frequency = positive(e);
    } else if (k == "bumps") {
        g.bumps = int_in(e, 1, 64);
    } else if (k == "normalize_area") {
        g.normalize_area = to_bool(e);
    } else if (k == "seed") {
        const long long s = to_integer(e);
        require(s >= 0, e, "[0, 2^63)");
        g.seed = static_cast<std::uint64_t>(s);
    } else if (k == "neck_radius") {
        g.neck_radius = to_double(e);
        require(g.neck_radius > 0.0 && g.neck_radius < 0.5, e, "(0, 0.5)");
    } else if (k == "axes") {
        const auto v = to_list(e);
        require(v.size() == 3 && std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; }), e,
                "three positive numbers");
        g.axes = {v[0], v[1], v[2]};
    } else if (k == "grid_u") {
        g.grid_u = int_in(e, 3, 4096);
    } else if (k == "grid_v") {
        g.grid_v = int_in(e, 3, 4096);
    } else if (k == "major_radius") {
        g.major_radius = positive(e);
    } else if (k == "minor_radius") {
        g.minor_radius = positive(e);
    } else {
        throw ConfigError(e.path(), e.line, "unknown key");
    }
}

void apply_params(ScenarioParams& p, const Entry& e)
{
    const std::string& k = e.key;
    auto positive_list = [&] {
        const auto v = to_list(e);
        require(std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; }), e, "(0, inf)");
        return v;
    };
    if (k == "gamma") {
        p.gamma = to_double(e);
        require(p.gamma > 0.0 && p.gamma < 0.5, e, "(0, 0.5)");
    } else if (k == "delta") {
        p.delta = positive(e);
    } else if (k == "epsilon") {
        p.epsilon = positive(e);
    } else if (k == "w") {
        p.w = positive(e);
    } else if (k == "amplitudes") {
        p.amplitudes = positive_list();
    } else if (k == "necks") {
        p.necks = positive_list();
        for (std::size_t i = 0; i < p.necks.size(); ++i) {
            require(p.necks[i] < 0.5 && (i == 0 || p.necks[i] < p.necks[i - 1]), e,
                    "strictly descending values in (0, 0.5)");
        }
    } else if (k == "radii") {
        p.radii = positive_list();
    } else if (k == "samples") {
        p.samples = int_in(e, 1, 1000000);
    } else if (k == "seed") {
        const long long s = to_integer(e);
        require(s >= 0, e, "[0, 2^63)");
        p.seed = static_cast<std::uint64_t>(s);
    } else if (k == "a_min") {
        p.a_min = positive(e);
    } else if (k == "a_max") {
        p.a_max = positive(e);
    } else if (k == "neck_samples") {
        p.neck_samples = int_in(e, 1, 100000);
    } else if (k == "r_max") {
        p.r_max = positive(e);
    } else if (k == "theta_radius") {
        p.theta_radius = positive(e);
    } else if (k == "willmore_tolerance") {
        p.willmore_tolerance = positive(e);
    } else if (k == "rd_ratio") {
        p.rd_ratio = positive(e);
    } else if (k == "basepoints") {
        p.basepoints = int_in(e, 1, 100000);
    } else if (k == "torus_grid") {
        p.torus_grid = int_in(e, 3, 4096);
    } else if (k == "c_tolerance") {
        p.c_tolerance = positive(e);
    } else if (k == "j_bound") {
        p.j_bound = positive(e);
    } else {
        throw ConfigError(e.path(), e.line, "unknown key");
    }
}

Scenario scenario_from_string(const Entry& e)
{
    static const std::map<std::string, Scenario> names{
        {"RigidityCurve", Scenario::RigidityCurve},           {"BubblingSweep", Scenario::BubblingSweep},
        {"MonotonicityAudit", Scenario::MonotonicityAudit},   {"MinimalSphereCheck", Scenario::MinimalSphereCheck},
        {"DensityScan", Scenario::DensityScan},               {"SingleReport", Scenario::SingleReport},
    };
    const auto it = names.find(e.value);
    if (it == names.end()) throw ConfigError(e.path(), e.line, "unknown scenario '" + e.value + "'");
    return it->second;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_roundtrip(v[i]);
    return s;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", 0, "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::RigidityCurve: return "RigidityCurve";
    case Scenario::BubblingSweep: return "BubblingSweep";
    case Scenario::MonotonicityAudit: return "MonotonicityAudit";
    case Scenario::MinimalSphereCheck: return "MinimalSphereCheck";
    case Scenario::DensityScan: return "DensityScan";
    case Scenario::SingleReport: return "SingleReport";
    }
    return "?";
}

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir)
{
    ExperimentConfig c;
    bool have_scenario = false;
    std::size_t generator_line = 0;
    std::size_t mesh_line = 0;
    for (const Entry& e : tokenize(text)) {
        if (e.section.empty()) {
            if (e.key == "scenario") {
                c.scenario = scenario_from_string(e);
                have_scenario = true;
            } else if (e.key == "output_dir") {
                if (e.value.empty()) throw ConfigError(e.path(), e.line, "empty path");
                c.output_dir = base_dir / e.value;
            } else if (e.key == "input_mesh") {
                const std::filesystem::path p = base_dir / e.value;
                if (!std::filesystem::is_regular_file(p)) {
                    throw ConfigError(e.path(), e.line, "file does not exist: " + p.string());
                }
                c.input_mesh = p;
                mesh_line = e.line;
            } else {
                throw ConfigError(e.path(), e.line, "unknown key");
            }
        } else if (e.section == "generator") {
            if (!c.generator) {
                c.generator.emplace();
                generator_line = e.line;
            }
            apply_generator(*c.generator, e);
        } else {
            apply_params(c.params, e);
        }
    }
    if (!have_scenario) throw ConfigError("scenario", 0, "missing required key");
    if (c.generator && c.input_mesh) {
        throw ConfigError("input_mesh", mesh_line, "give either input_mesh or a [generator] section, not both");
    }
    if (c.params.a_min > c.params.a_max) throw ConfigError("params.a_min", 0, "a_min exceeds a_max");
    const bool needs_surface = c.scenario == Scenario::MonotonicityAudit || c.scenario == Scenario::DensityScan ||
                               c.scenario == Scenario::SingleReport;
    if (needs_surface && !c.generator && !c.input_mesh) {
        throw ConfigError("generator", 0, "scenario " + to_string(c.scenario) + " needs input_mesh or [generator]");
    }
    if (c.scenario == Scenario::RigidityCurve && c.generator && c.generator->kind != GeneratorKind::PerturbedSphere) {
        throw ConfigError("generator.kind", generator_line, "RigidityCurve sweeps PerturbedSphere amplitudes");
    }
    if (c.scenario == Scenario::BubblingSweep && c.generator && c.generator->kind != GeneratorKind::BubblingPair) {
        throw ConfigError("generator.kind", generator_line, "BubblingSweep needs kind = BubblingPair");
    }
    if ((c.scenario == Scenario::RigidityCurve || c.scenario == Scenario::BubblingSweep) && c.input_mesh) {
        throw ConfigError("input_mesh", mesh_line, to_string(c.scenario) + " generates its own surfaces");
    }
    return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path)
{
    return parse_config_text(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

GeneratorSpec parse_generator_spec(const std::string& file_or_inline)
{
    if (std::filesystem::is_regular_file(file_or_inline)) {
        GeneratorSpec g;
        bool any = false;
        for (const Entry& e : tokenize(read_file(file_or_inline))) {
            if (e.section != "generator") continue;
            apply_generator(g, e);
            any = true;
        }
        if (!any) throw ConfigError("generator", 0, "no [generator] section in " + file_or_inline);
        return g;
    }
    // Inline: comma-separated key=value; a piece without '=' continues the previous list value.
    std::vector<std::string> pieces;
    std::stringstream ss(file_or_inline);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find('=') == std::string::npos && !pieces.empty()) {
            pieces.back() += "," + item;
        } else {
            pieces.push_back(item);
        }
    }
    GeneratorSpec g;
    std::set<std::string> seen;
    for (const std::string& piece : pieces) {
        const auto eq = piece.find('=');
        if (eq == std::string::npos) throw ConfigError(trim(piece), 0, "expected key=value in generator spec");
        Entry e{"generator", trim(piece.substr(0, eq)), trim(piece.substr(eq + 1)), 0};
        if (!seen.insert(e.key).second) throw ConfigError(e.path(), 0, "duplicate key");
        apply_generator(g, e);
    }
    return g;
}

std::string resolved_config(const ExperimentConfig& c)
{
    std::ostringstream o;
    o << "scenario = " << to_string(c.scenario) << "\n";
    o << "output_dir = " << c.output_dir.generic_string() << "\n";
    if (c.input_mesh) o << "input_mesh = " << c.input_mesh->generic_string() << "\n";
    if (c.generator) {
        const GeneratorSpec& g = *c.generator;
        o << "\n[generator]\n"
          << "kind = " << to_string(g.kind) << "\n"
          << "subdiv = " << g.subdiv << "\n"
          << "radius = " << format_roundtrip(g.radius) << "\n"
          << "amplitude = " << format_roundtrip(g.amplitude) << "\n"
          << "frequency = " << format_roundtrip(g.frequency) << "\n"
          << "bumps = " << g.bumps << "\n"
          << "normalize_area = " << (g.normalize_area ? "true" : "false") << "\n"
          << "seed = " << g.seed << "\n"
          << "neck_radius = " << format_roundtrip(g.neck_radius) << "\n"
          << "axes = " << join({g.axes[0], g.axes[1], g.axes[2]}) << "\n"
          << "grid_u = " << g.grid_u << "\n"
          << "grid_v = " << g.grid_v << "\n"
          << "major_radius = " << format_roundtrip(g.major_radius) << "\n"
          << "minor_radius = " << format_roundtrip(g.minor_radius) << "\n";
    }
    const ScenarioParams& p = c.params;
    o << "\n[params]\n"
      << "gamma = " << format_roundtrip(p.gamma) << "\n"
      << "delta = " << format_roundtrip(p.delta) << "\n"
      << "epsilon = " << format_roundtrip(p.epsilon) << "\n";
    if (p.w) o << "w = " << format_roundtrip(*p.w) << "\n";
    o << "amplitudes = " << join(p.amplitudes) << "\n"
      << "necks = " << join(p.necks) << "\n"
      << "radii = " << join(p.radii) << "\n"
      << "samples = " << p.samples << "\n"
      << "seed = " << p.seed << "\n"
      << "a_min = " << format_roundtrip(p.a_min) << "\n"
      << "a_max = " << format_roundtrip(p.a_max) << "\n"
      << "neck_samples = " << p.neck_samples << "\n"
      << "r_max = " << format_roundtrip(p.r_max) << "\n"
      << "theta_radius = " << format_roundtrip(p.theta_radius) << "\n"
      << "willmore_tolerance = " << format_roundtrip(p.willmore_tolerance) << "\n"
      << "rd_ratio = " << format_roundtrip(p.rd_ratio) << "\n"
      << "basepoints = " << p.basepoints << "\n"
      << "torus_grid = " << p.torus_grid << "\n"
      << "c_tolerance = " << format_roundtrip(p.c_tolerance) << "\n"
      << "j_bound = " << format_roundtrip(p.j_bound) << "\n";
    return o.str();
}

std::string config_help()
{
    return R"(Config file: `key = value` lines, `#` comments, sections [generator] and [params].

Top level:
  scenario      RigidityCurve | BubblingSweep | MonotonicityAudit |
                MinimalSphereCheck | DensityScan | SingleReport (required)
  output_dir    output directory, relative to the config file (lab_out)
  input_mesh    .obj or .ndmesh surface; excludes [generator]

[generator]
  kind          Icosphere | PerturbedSphere | BubblingPair | CliffordTorus |
                Ellipsoid | TorusOfRevolution (Icosphere)
  subdiv        refinement level 0..7 (4)
  radius        Icosphere radius (1)
  amplitude     PerturbedSphere bump height in [0, 0.5) (0.05)
  frequency     PerturbedSphere plane-wave frequency (2)
  bumps         PerturbedSphere number of bumps (3)
  normalize_area  rescale to area 4 pi, true | false (false)
  seed          PerturbedSphere seed (1)
  neck_radius   BubblingPair waist in (0, 0.5) (0.1)
  axes          Ellipsoid semi-axes (1, 1, 1.3)
  grid_u, grid_v  torus grid sizes (64, 64)
  major_radius, minor_radius  TorusOfRevolution radii (2, 0.5)

[params]
  gamma         non-concentration level in (0, 0.5) (0.1)
  delta         monotonicity delta > 0 (0.5)
  epsilon       deficit level > 0 (0.05)
  w             Willmore bound W > 0 (the surface's own W)
  amplitudes    RigidityCurve amplitudes (0.01, 0.02, 0.04, 0.08)
  necks         BubblingSweep necks, strictly descending (0.3, 0.1, 0.05, 0.02)
  radii         DensityScan radii (0.05, 0.1, 0.2, 0.4, 0.8)
  samples       MonotonicityAudit sample count (500)
  seed          MonotonicityAudit sample seed (1)
  a_min, a_max  MonotonicityAudit outer radius range (0.01, 1)
  neck_samples  BubblingSweep basepoints on each neck (32)
  r_max         cap of the r^D search (1)
  theta_radius  radius of the reported neck density ratio (0.25)
  willmore_tolerance  BubblingSweep relative distance of the last W to 32 pi (0.1)
  rd_ratio      BubblingSweep required drop of min r^D (5)
  basepoints    DensityScan basepoint count (4)
  torus_grid    MinimalSphereCheck Clifford torus grid (128)
  c_tolerance   MinimalSphereCheck relative tolerance on c (0.03)
  j_bound       MinimalSphereCheck bound on J (0.5)
)";
}

} // namespace cmclab::lab
