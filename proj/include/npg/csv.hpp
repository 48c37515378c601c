#pragma once

#include <string>
#include <vector>

#include "npg/data.hpp"
#include "npg/matrix.hpp"

namespace npg {

// Header row of column names, comma-separated numeric body, UTF-8, '.'
// decimal separator. Lines starting with '#' are skipped. Parse failures
// throw DataError citing "row R, column C" (1-based body coordinates).
DataMatrix load_csv(const std::string& path);
DataMatrix parse_csv(const std::string& text, const std::string& origin);

// Values formatted with printf-style %.6g.
std::string format_number(double v);

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names,
                      const std::string& repro_header);
void write_matrix_csv(const std::string& path, const SymMatrix& m,
                      const std::vector<std::string>& column_names,
                      const std::string& repro_header);

struct EdgeRecord {
    int i = 0;  // 0-based internally; written 1-based
    int j = 0;
    double weight = 0.0;
};

// "i,j,weight" rows in the given order.
void write_edges_csv(const std::string& path, const std::vector<EdgeRecord>& edges,
                     const std::string& repro_header, const std::string& weight_name);

}  // namespace npg
