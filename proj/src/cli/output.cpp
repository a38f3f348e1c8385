#include "cli/output.hpp"

#include <cstdio>
#include <fstream>

#include "exactflow/errors.hpp"

namespace exactflow::cli {

namespace {
constexpr const char* kVersion = "1.0.0";
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const nlohmann::json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_vtk(std::ostream& out, const RunConfig& cfg, const std::vector<FlowState>& states) {
    const auto& ax = cfg.grid.axes;
    Axis a0, a1, a2{0.0, 1.0, 1};
    if (cfg.is_axisym()) {
        a0 = ax[1];
        a1 = ax[0];
    } else {
        a0 = ax[0];
        a1 = ax[1];
        a2 = ax[2];
    }
    out << "# vtk DataFile Version 3.0\n";
    out << "exactflow " << cfg.family << "\n";
    out << "ASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << a0.n << ' ' << a1.n << ' ' << a2.n << '\n';
    out << "ORIGIN " << format_number(a0.lo) << ' ' << format_number(a1.lo) << ' ' << format_number(a2.lo) << '\n';
    out << "SPACING " << format_number(a0.n > 1 ? a0.spacing() : 1.0) << ' '
        << format_number(a1.n > 1 ? a1.spacing() : 1.0) << ' ' << format_number(a2.n > 1 ? a2.spacing() : 1.0) << '\n';
    out << "POINT_DATA " << states.size() << '\n';
    out << "VECTORS velocity double\n";
    for (const FlowState& s : states) {
        if (cfg.is_axisym())
            out << format_number(s.v()) << ' ' << format_number(s.u()) << " 0\n";
        else
            out << format_number(s.u()) << ' ' << format_number(s.v()) << ' ' << format_number(s.w()) << '\n';
    }
    out << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
    for (const FlowState& s : states) out << format_number(s.rho()) << '\n';
    out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
    for (const FlowState& s : states) out << format_number(s.p()) << '\n';
}

void write_json_rows(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    nlohmann::json doc;
    doc["columns"] = header;
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
}

void write_meta(const std::string& data_path, const std::string& command, const std::string& format,
                const nlohmann::json& config, std::size_t records) {
    nlohmann::json meta;
    meta["tool"] = "exactflow";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["format"] = format;
    meta["config_hash"] = "fnv1a64:" + config_hash(config);
    meta["records"] = records;
    const std::string path = data_path + ".meta.json";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << meta.dump(2) << '\n';
}

}  // namespace exactflow::cli
