#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace greenlab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic CSV table: header row, UTF-8, '.' decimal separator,
/// 17 significant digits. Cells are written in insertion order.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);
    std::string to_string() const;
    void write(const std::string& path) const;
    static std::string format_number(double v); // %.17g

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Verdict JSON: { experiment, config_hash, verdict, metrics, seed, version, config }.
nlohmann::json make_verdict(const std::string& experiment, const nlohmann::json& resolved_config,
                            std::uint64_t seed, bool pass, const nlohmann::json& metrics);

/// FNV-1a hash of the canonical (sorted-key) dump of a JSON value.
std::uint64_t config_hash(const nlohmann::json& j);

} // namespace greenlab
