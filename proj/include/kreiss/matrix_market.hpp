#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kreiss/matrix.hpp"

namespace kreiss {

/// Reads `%%MatrixMarket matrix {array|coordinate} {real|integer|complex}
/// {general|symmetric|hermitian|skew-symmetric}`. Real input is promoted to
/// complex. Parse errors name `source:line:column`.
CMatrix read_matrix_market(std::istream& in, const std::string& source = "<input>");
CMatrix read_matrix_market_file(const std::string& path);

/// Array complex general, 17 significant digits.
void write_matrix_market(std::ostream& out, const CMatrix& m);

/// Concatenated Matrix Market blocks, each preceded by a `% xi: v1 v2 ...`
/// comment line giving the sample point.
struct SymbolTable {
    std::vector<std::vector<double>> xi;
    std::vector<CMatrix> matrices;
};

SymbolTable read_symbol_table(std::istream& in, const std::string& source = "<input>");
SymbolTable read_symbol_table_file(const std::string& path);

} // namespace kreiss
