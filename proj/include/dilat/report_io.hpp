#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dilat/report.hpp"

namespace dilat {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Top-level run artifact: config echo, one section per executed check group,
/// wall clock. Field names are schema-stable; wall_ms is the only field
/// excluded from the byte-identical determinism contract.
struct RunReport {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<Report> sections;
    double wall_ms = 0.0;

    bool all_pass() const {
        for (const auto& s : sections)
            if (!s.all_pass()) return false;
        return true;
    }
};

std::string format_sig17(double v);

nlohmann::json to_json(const Report& r);
nlohmann::json to_json(const RunReport& r);

/// CSV with a header row; numbers rendered with 17 significant digits.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<std::string>& cells);
    void add_row_values(const std::vector<double>& values);

    std::string to_string() const;
    void write(const std::string& path) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dilat
