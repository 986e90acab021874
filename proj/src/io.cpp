#include "biset/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biset/error.hpp"

namespace biset {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA" || s == "nan" || s == "NaN";
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto at = line.find(',', start);
        cells.push_back(trim(line.substr(start, at == line.npos ? line.npos : at - start)));
        if (at == line.npos) return cells;
        start = at + 1;
    }
}

MeasurementTable assemble(const std::vector<std::vector<std::optional<double>>>& rows,
                          const std::string& source) {
    if (rows.empty()) throw IoError(source + ": table is empty");
    const auto p = static_cast<Eigen::Index>(rows.size());
    const auto q = static_cast<Eigen::Index>(rows.front().size());
    Matrix values(p, q);
    Mask missing = Mask::Constant(p, q, false);
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != q) {
            throw IoError(source + ": row " + std::to_string(i + 1) + " has " +
                          std::to_string(row.size()) + " cells, expected " + std::to_string(q));
        }
        for (Eigen::Index a = 0; a < q; ++a) {
            const auto& cell = row[static_cast<std::size_t>(a)];
            if (cell) {
                values(i, a) = *cell;
            } else {
                values(i, a) = 0.0;
                missing(i, a) = true;
            }
        }
    }
    try {
        if (missing.any()) return MeasurementTable(std::move(values), std::move(missing));
        return MeasurementTable(std::move(values));
    } catch (const Error& e) {
        throw IoError(source + ": " + e.what());
    }
}

}  // namespace

MeasurementTable read_table_csv(std::istream& in, const std::string& source) {
    std::vector<std::vector<std::optional<double>>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);
        std::vector<std::optional<double>> row;
        row.reserve(cells.size());
        bool non_numeric = false;
        for (auto cell : cells) {
            if (is_missing_token(cell)) {
                row.emplace_back(std::nullopt);
            } else if (auto v = parse_number(cell)) {
                row.emplace_back(*v);
            } else {
                non_numeric = true;
                break;
            }
        }
        if (non_numeric) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw IoError(source + ":" + std::to_string(line_no) + ": non-numeric cell");
        }
        first = false;
        rows.push_back(std::move(row));
    }
    return assemble(rows, source);
}

MeasurementTable read_table_json(std::istream& in, const std::string& source) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(source + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
        throw IoError(source + ": expected an object with a \"values\" array of rows");
    }
    std::vector<std::vector<std::optional<double>>> rows;
    for (const auto& r : doc["values"]) {
        if (!r.is_array()) throw IoError(source + ": every row of \"values\" must be an array");
        std::vector<std::optional<double>> row;
        for (const auto& cell : r) {
            if (cell.is_null()) {
                row.emplace_back(std::nullopt);
            } else if (cell.is_number()) {
                row.emplace_back(cell.get<double>());
            } else {
                throw IoError(source + ": table entries must be numbers or null");
            }
        }
        rows.push_back(std::move(row));
    }
    return assemble(rows, source);
}

MeasurementTable read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return json ? read_table_json(in, path) : read_table_csv(in, path);
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_table_csv(std::ostream& out, const MeasurementTable& t) {
    const auto& missing = t.missing();
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index a = 0; a < t.cols(); ++a) {
            if (a > 0) out << ',';
            if (missing && (*missing)(i, a)) continue;
            out << format_double(t.values()(i, a));
        }
        out << '\n';
    }
}

}  // namespace biset
