// SPDX-License-Identifier: Apache-2.0
//
// Small text-output helpers shared by the studies and the CLI. Numbers are
// printed with fixed printf formats so files are byte-identical across runs.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace swarmarray {

/// Fixed-point with `decimals` digits; "-inf"/"inf"/"nan" for non-finite values.
std::string fmt_fixed(double value, int decimals = 6);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& add_row(std::vector<std::string> cells);
    /// Lines starting with '#' written before the header.
    CsvTable& add_comment(std::string line);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> comments_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace swarmarray
