#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "wavelag/cube.hpp"
#include "wavelag/estimator.hpp"
#include "wavelag/laguerre.hpp"
#include "wavelag/simulate.hpp"
#include "wavelag/toeplitz.hpp"

namespace wavelag {

/// Cube on disk: a JSON header
///   {n1, n2, n, T, dtype: "f64", order: "t-major row-major",
///    endianness: "little", data: "<name>.bin"}
/// next to a raw file of n*n1*n2 little-endian doubles. The data file name is
/// the header's stem with ".bin" appended and is resolved relative to the header.
void write_cube(const std::filesystem::path& header, const Cube& cube);

/// Validates the header and the data file length before reading any values.
Cube read_cube(const std::filesystem::path& header);

/// Two-column CSV "t,value" with strictly increasing t.
struct Series {
    std::vector<double> t;
    std::vector<double> values;
};

Series read_series(const std::filesystem::path& path);
void write_series(const std::filesystem::path& path, const Series& series);

/// The uniform grid t_k = T k / n the series is sampled on.
TimeGrid grid_of(const Series& series);

/// Kernel Laguerre coefficients as CSV "l,value", l = 0, 1, ...
LagCoeffs read_coeffs(const std::filesystem::path& path);
void write_coeffs(const std::filesystem::path& path, const LagCoeffs& coeffs);

nlohmann::json to_json(const Diagnostics& d);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);
void write_norms_csv(std::ostream& out, const InverseNormTable& norms);

/// Least-squares slope of log y against log m over the given m range.
double loglog_slope(const std::vector<double>& y, std::size_t m_first, std::size_t m_last);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wavelag
