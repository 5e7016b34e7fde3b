#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace firmval {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);
/// Fixed two-decimal rendering for human-facing tables.
std::string format_fixed2(double value);

enum class ReportFormat { csv, json };

/// A named columnar table. Cells are JSON scalars; CSV rendering uses
/// shortest-round-trip decimals so identical inputs give identical bytes.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;

    void add_row(std::vector<nlohmann::json> cells);
};

/// Header (ordered key/value pairs: tool version, scenario digest, seed,
/// tolerances, echoed defaults) plus the tables.
struct Report {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<Table> tables;

    void set(const std::string& key, std::string value);
};

std::string table_to_csv(const Table& table);
nlohmann::json table_to_json(const Table& table);
std::string header_to_csv(const Report& report);
nlohmann::json header_to_json(const Report& report);

/// Writes header.<ext> plus one <table-name>.<ext> per table into out_dir.
/// Returns the list of file names written.
std::vector<std::string> write_report(const Report& report,
                                      const std::filesystem::path& out_dir,
                                      ReportFormat format);

/// Renders every table at two decimals for terminal output.
std::string human_summary(const Report& report);

/// FNV-1a 64-bit digest of a byte string, as fixed-width hex.
std::string content_digest(const std::string& bytes);

}  // namespace firmval
