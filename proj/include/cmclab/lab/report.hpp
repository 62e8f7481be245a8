#pragma once

#include <cmclab/density.hpp>
#include <cmclab/functionals.hpp>
#include <cmclab/mesh.hpp>
#include <cmclab/sphere_map.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cmclab::lab {

/// Shortest round-trip decimal, capped at 12 significant digits.
std::string format_number(double value);

/// RFC-4180 table with LF line endings.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string str() const;
    void write(const std::filesystem::path& path) const;
};

/// Ordered key=value lines.
class KeyValueReport {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, bool value);
    void append(const std::string& prefix, const KeyValueReport& other);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return m_entries; }
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> m_entries;
};

KeyValueReport to_report(const MeshDiagnostics& d);
KeyValueReport to_report(const EnergyReport& r);
KeyValueReport to_report(const AlexandrovReport& r);
KeyValueReport to_report(const RigidityReport& r);
KeyValueReport to_report(const RadiiReport& r);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace cmclab::lab
