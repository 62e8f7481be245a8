#include <cmclab/errors.hpp>
#include <cmclab/lab/report.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cmclab::lab {

namespace {

int significant_digits(std::string_view s)
{
    const auto e = s.find_first_of("eE");
    s = s.substr(0, e);
    int count = 0;
    bool leading = true;
    for (char ch : s) {
        if (ch < '0' || ch > '9') continue;
        if (leading && ch == '0') continue;
        leading = false;
        ++count;
    }
    return count;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : "n/a"; }

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    std::string s(buf, res.ptr);
    if (significant_digits(s) <= 12) return s;
    res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != header.size()) throw Error("CSV row width does not match the header");
    rows.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::ostringstream o;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) o << (i ? "," : "") << csv_field(cells[i]);
        o << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return o.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void KeyValueReport::add(const std::string& key, const std::string& value) { m_entries.emplace_back(key, value); }
void KeyValueReport::add(const std::string& key, double value) { add(key, format_number(value)); }
void KeyValueReport::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void KeyValueReport::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

void KeyValueReport::append(const std::string& prefix, const KeyValueReport& other)
{
    for (const auto& [k, v] : other.entries()) add(prefix + k, v);
}

std::string KeyValueReport::str() const
{
    std::string s;
    for (const auto& [k, v] : m_entries) s += k + " = " + v + "\n";
    return s;
}

KeyValueReport to_report(const MeshDiagnostics& d)
{
    KeyValueReport r;
    r.add("closed", d.is_closed);
    r.add("manifold", d.is_manifold);
    r.add("oriented", d.is_oriented);
    r.add("euler_characteristic", d.euler_characteristic);
    r.add("edges", static_cast<int>(d.num_edges));
    r.add("components", static_cast<int>(d.num_components));
    r.add("degenerate_triangles", static_cast<int>(d.degenerate_triangles));
    r.add("min_triangle_area", d.min_triangle_area);
    r.add("genus", d.genus ? std::to_string(*d.genus) : std::string("n/a"));
    r.add("ok", d.ok());
    return r;
}

KeyValueReport to_report(const EnergyReport& e)
{
    KeyValueReport r;
    r.add("area", e.area);
    r.add("willmore_quarter", e.willmore_quarter);
    r.add("willmore_raw", e.willmore_raw);
    r.add("deficit_l2", optional_number(e.deficit_l2));
    r.add("mean_scalar", optional_number(e.mean_scalar));
    r.add("deficit_abs", e.deficit_abs);
    r.add("j_value", e.j_value);
    r.add("j_c", e.j_c);
    r.add("tracefree_energy", e.tracefree_energy);
    r.add("total_curvature", e.total_curvature);
    r.add("euler_char", e.euler_char);
    r.add("diameter", e.diameter);
    return r;
}

KeyValueReport to_report(const AlexandrovReport& a)
{
    KeyValueReport r;
    r.add("enclosed_volume", a.enclosed_volume);
    r.add("h0", a.h0);
    r.add("delta2", a.delta2);
    r.add("rescale_factor", a.rescale_factor);
    r.add("flipped", a.flipped);
    return r;
}

KeyValueReport to_report(const RigidityReport& g)
{
    KeyValueReport r;
    r.add("w22_deficit", g.w22_deficit);
    r.add("sup_log_conformal", g.sup_log_conformal);
    r.add("sup_exp_conformal", g.sup_exp_conformal);
    r.add("c_deviation", optional_number(g.c_deviation));
    r.add("qc_max", g.qc_max);
    r.add("qc_mean", g.qc_mean);
    r.add("out_of_space_energy", g.out_of_space_energy);
    std::string rot;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) rot += (i || j ? " " : "") + format_number(g.rotation(i, j));
    }
    r.add("rotation", rot);
    r.add("translation", format_number(g.translation[0]) + " " + format_number(g.translation[1]) + " " +
                             format_number(g.translation[2]));
    return r;
}

KeyValueReport to_report(const RadiiReport& d)
{
    KeyValueReport r;
    r.add("gamma", d.gamma);
    r.add("r_D", d.r_D);
    r.add("epsilon_tc", d.epsilon_tc);
    r.add("r_eps", d.r_eps);
    r.add("sigma", d.sigma);
    return r;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace cmclab::lab
