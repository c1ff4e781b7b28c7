#include "dilat/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dilat {

std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["title"] = r.title;
    j["config"] = r.config;
    j["all_pass"] = r.all_pass();
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : r.records) {
        nlohmann::json jr;
        jr["name"] = rec.name;
        jr["status"] = to_string(rec.status);
        jr["residual"] = rec.residual;
        jr["witness"] = rec.witness;
        recs.push_back(std::move(jr));
    }
    return j;
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["artifact"] = "dilat";
    j["version"] = kArtifactVersion;
    j["command"] = r.command;
    j["config"] = r.config;
    j["all_pass"] = r.all_pass();
    j["wall_ms"] = r.wall_ms;
    auto& secs = j["sections"] = nlohmann::json::array();
    for (const auto& s : r.sections) secs.push_back(to_json(s));
    return j;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row width does not match header");
    rows_.push_back(cells);
}

void CsvTable::add_row_values(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_sig17(v));
    add_row(cells);
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        out += header_[i];
        out += (i + 1 < header_.size()) ? "," : "\n";
    }
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? "," : "\n";
        }
    }
    return out;
}

void CsvTable::write(const std::string& path) const { write_text_file(path, to_string()); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dilat
