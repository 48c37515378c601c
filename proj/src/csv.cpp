#include "npg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace npg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

}  // namespace

DataMatrix parse_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    int body_row = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_line(line);
        if (!have_header) {
            for (const std::string& f : fields) names.push_back(trim(f));
            have_header = true;
            continue;
        }
        ++body_row;
        if (fields.size() != names.size())
            throw DataError(origin + ": row " + std::to_string(body_row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(names.size()));
        std::vector<double> row(fields.size());
        for (size_t c = 0; c < fields.size(); ++c) {
            const std::string f = trim(fields[c]);
            try {
                size_t used = 0;
                row[c] = std::stod(f, &used);
                if (used != f.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw DataError(origin + ": non-numeric value '" + f + "' at row " +
                                std::to_string(body_row) + ", column " + std::to_string(c + 1));
            }
        }
        rows.push_back(std::move(row));
    }
    if (!have_header) throw DataError(origin + ": missing header row");
    if (rows.empty()) throw DataError(origin + ": no data rows");

    DataMatrix data(static_cast<int>(rows.size()), static_cast<int>(names.size()));
    data.column_names = names;
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.p; ++j) data(i, j) = rows[i][j];
    return data;
}

DataMatrix load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

void write_matrix_impl(const std::string& path, int rows, int cols, auto&& at,
                       const std::vector<std::string>& column_names,
                       const std::string& repro_header) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    if (!repro_header.empty()) out << "# " << repro_header << "\n";
    for (int j = 0; j < cols; ++j) {
        if (j) out << ",";
        if (j < static_cast<int>(column_names.size()) && !column_names[j].empty())
            out << column_names[j];
        else
            out << "v" << (j + 1);
    }
    out << "\n";
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out << ",";
            out << format_number(at(i, j));
        }
        out << "\n";
    }
}

}  // namespace

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names,
                      const std::string& repro_header) {
    write_matrix_impl(path, m.rows(), m.cols(), [&](int i, int j) { return m(i, j); },
                      column_names, repro_header);
}

void write_matrix_csv(const std::string& path, const SymMatrix& m,
                      const std::vector<std::string>& column_names,
                      const std::string& repro_header) {
    write_matrix_impl(path, m.dim(), m.dim(), [&](int i, int j) { return m(i, j); },
                      column_names, repro_header);
}

void write_edges_csv(const std::string& path, const std::vector<EdgeRecord>& edges,
                     const std::string& repro_header, const std::string& weight_name) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    if (!repro_header.empty()) out << "# " << repro_header << "\n";
    out << "i,j," << weight_name << "\n";
    for (const EdgeRecord& e : edges)
        out << (e.i + 1) << "," << (e.j + 1) << "," << format_number(e.weight) << "\n";
}

}  // namespace npg
