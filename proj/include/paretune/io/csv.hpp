#pragma once
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "../errors.hpp"
#include "../solvers/jgl.hpp"
#include "atomic_file.hpp"

namespace paretune {

/// Header plus numeric body of one CSV file.
struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;  // rows x header.size()
};

namespace detail {

inline std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Comma-separated fields; double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline bool parse_double(const std::string& s, double& v)
{
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

} // namespace detail

/// Reads a UTF-8 CSV with a header row and numeric cells. Cell coordinates in
/// messages are 1-based with the header as row 1.
inline CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    CsvTable t;
    t.header = detail::split_csv_line(line);
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (t.header[j].empty()) throw DataError(path + ": empty column name in header, column " + std::to_string(j + 1));
        for (std::size_t k = 0; k < j; ++k)
            if (t.header[k] == t.header[j]) throw DataError(path + ": duplicate column '" + t.header[j] + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != t.header.size())
            throw DataError(path + ": row " + std::to_string(row_no) + " has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(t.header.size()));
        std::vector<double> r(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j)
            if (!detail::parse_double(fields[j], r[j]))
                throw DataError(path + ": non-numeric value '" + fields[j] + "' at row " + std::to_string(row_no) +
                                ", column " + std::to_string(j + 1) + " (" + t.header[j] + ")");
        rows.push_back(std::move(r));
    }
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < t.header.size(); ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

/// Writes values with round-trip precision, atomically.
inline void write_csv(const std::string& path, const std::vector<std::string>& header, const Eigen::MatrixXd& values)
{
    if (static_cast<Eigen::Index>(header.size()) != values.cols())
        throw std::invalid_argument("header size does not match column count");
    std::ostringstream os;
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << detail::csv_field(header[j]);
    os << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const auto res = std::to_chars(buf, buf + sizeof buf, values(i, j));
            os << (j ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        os << '\n';
    }
    write_file_atomic(path, os.str());
}

struct RawRegression {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> predictor_names;
};

/// X = every non-response column in header order, y = the response column.
inline RawRegression load_regression_csv(const std::string& path, const std::string& response_column)
{
    const CsvTable t = read_csv(path);
    const auto it = std::find(t.header.begin(), t.header.end(), response_column);
    if (it == t.header.end()) throw DataError(path + ": response column '" + response_column + "' not found");
    const auto r = static_cast<Eigen::Index>(it - t.header.begin());
    RawRegression out;
    out.y = t.values.col(r);
    out.X.resize(t.values.rows(), t.values.cols() - 1);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < t.values.cols(); ++j) {
        if (j == r) continue;
        out.X.col(c++) = t.values.col(j);
        out.predictor_names.push_back(t.header[static_cast<std::size_t>(j)]);
    }
    return out;
}

/// One CSV per group; every file must have the same header in the same order.
inline MultiGroupDataset load_group_csvs(const std::vector<std::string>& paths)
{
    if (paths.empty()) throw ConfigError("no group files given");
    std::vector<Eigen::MatrixXd> groups;
    std::vector<std::string> header;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        CsvTable t = read_csv(paths[k]);
        if (k == 0) {
            header = t.header;
        } else if (t.header != header) {
            throw DataError("header of '" + paths[k] + "' differs from header of '" + paths[0] + "'");
        }
        groups.push_back(std::move(t.values));
    }
    return make_multigroup(std::move(groups), header);
}

} // namespace paretune
