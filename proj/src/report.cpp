#include "firmval/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace firmval {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buffer, end);
}

std::string format_fixed2(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return std::string(buffer);
}

void Table::add_row(std::vector<json> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("row width does not match table columns: " + name);
    rows.push_back(std::move(cells));
}

void Report::set(const std::string& key, std::string value) {
    header.emplace_back(key, std::move(value));
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string escaped = "\"";
    for (char c : field) {
        if (c == '"') escaped += '"';
        escaped += c;
    }
    escaped += '"';
    return escaped;
}

std::string cell_to_string(const json& cell, bool fixed2) {
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
    if (cell.is_number_unsigned()) return std::to_string(cell.get<std::uint64_t>());
    if (cell.is_number_float())
        return fixed2 ? format_fixed2(cell.get<double>())
                      : format_double(cell.get<double>());
    return cell.dump();
}

}  // namespace

std::string table_to_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << csv_escape(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_escape(cell_to_string(row[i], false));
        out << '\n';
    }
    return out.str();
}

json table_to_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json object = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) object[table.columns[i]] = row[i];
        rows.push_back(std::move(object));
    }
    json result = json::object();
    result["name"] = table.name;
    result["rows"] = rows;
    return result;
}

std::string header_to_csv(const Report& report) {
    std::ostringstream out;
    out << "field,value\n";
    for (const auto& [key, value] : report.header)
        out << csv_escape(key) << ',' << csv_escape(value) << '\n';
    return out.str();
}

json header_to_json(const Report& report) {
    json object = json::object();
    for (const auto& [key, value] : report.header) object[key] = value;
    return object;
}

std::vector<std::string> write_report(const Report& report,
                                      const std::filesystem::path& out_dir,
                                      ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    const std::string ext = format == ReportFormat::csv ? ".csv" : ".json";
    std::vector<std::string> written;

    auto emit = [&](const std::string& stem, const std::string& content) {
        const std::string filename = stem + ext;
        std::ofstream out(out_dir / filename, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + filename);
        out << content;
        written.push_back(filename);
    };

    emit("header", format == ReportFormat::csv
                       ? header_to_csv(report)
                       : header_to_json(report).dump(2) + "\n");
    for (const auto& table : report.tables)
        emit(table.name, format == ReportFormat::csv
                             ? table_to_csv(table)
                             : table_to_json(table).dump(2) + "\n");
    return written;
}

std::string human_summary(const Report& report) {
    std::ostringstream out;
    for (const auto& table : report.tables) {
        out << "== " << table.name << " ==\n";
        std::vector<std::size_t> widths(table.columns.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            widths[i] = table.columns[i].size();
        for (const auto& row : table.rows) {
            std::vector<std::string> rendered;
            for (std::size_t i = 0; i < row.size(); ++i) {
                rendered.push_back(cell_to_string(row[i], true));
                widths[i] = std::max(widths[i], rendered.back().size());
            }
            cells.push_back(std::move(rendered));
        }
        auto pad = [](const std::string& s, std::size_t w) {
            return s + std::string(w - s.size(), ' ');
        };
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << (i ? "  " : "") << pad(table.columns[i], widths[i]);
        out << '\n';
        for (const auto& row : cells) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "  " : "") << pad(row[i], widths[i]);
            out << '\n';
        }
        out << '\n';
    }
    return out.str();
}

std::string content_digest(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

}  // namespace firmval
