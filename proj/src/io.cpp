#include "greenlab/io.hpp"

#include "greenlab/special_functions.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace greenlab {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

std::string CsvTable::format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw IoError("CsvTable: row width mismatch");
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_number(v));
    rows_.push_back(std::move(row));
}

void CsvTable::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw IoError("CsvTable: row width mismatch");
    rows_.push_back(cells);
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) os << ',';
        os << header_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path) const { write_text_file(path, to_string()); }

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::uint64_t config_hash(const nlohmann::json& j) {
    const std::string canon = j.dump(); // nlohmann objects keep sorted keys
    return fnv1a64(canon.data(), canon.size());
}

nlohmann::json make_verdict(const std::string& experiment, const nlohmann::json& resolved_config,
                            std::uint64_t seed, bool pass, const nlohmann::json& metrics) {
    nlohmann::json v;
    v["experiment"] = experiment;
    v["config_hash"] = config_hash(resolved_config);
    v["config"] = resolved_config;
    v["seed"] = seed;
    v["verdict"] = pass ? "pass" : "fail";
    v["metrics"] = metrics;
#ifdef GREENLAB_VERSION
    v["version"] = GREENLAB_VERSION;
#else
    v["version"] = "v0.0.0";
#endif
    return v;
}

} // namespace greenlab
