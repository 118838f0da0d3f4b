#include "wavelag/io.hpp"

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(sizeof(double) == 8);

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(const std::string& field, const fs::path& path, std::size_t line) {
    const char* s = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw IoError(path.string() + ":" + std::to_string(line) + ": cannot parse number '" + field + "'");
    return v;
}

// Rows of a two-column CSV, skipping one non-numeric header line and blanks.
std::vector<std::pair<double, double>> read_two_columns(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
        const std::string a = line.substr(0, comma);
        const std::string b = line.substr(comma + 1);
        if (rows.empty() && lineno == 1) {
            char* end = nullptr;
            std::strtod(a.c_str(), &end);
            if (end == a.c_str()) continue;  // header
        }
        rows.emplace_back(parse_double(a, path, lineno), parse_double(b, path, lineno));
    }
    if (rows.empty()) throw IoError("'" + path.string() + "' has no data rows");
    return rows;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
T require_field(const json& header, const char* key, const fs::path& path) {
    if (!header.contains(key)) throw IoError("cube header '" + path.string() + "' lacks field '" + key + "'");
    try {
        return header.at(key).get<T>();
    } catch (const json::exception&) {
        throw IoError("cube header '" + path.string() + "' has a malformed field '" + key + "'");
    }
}

}  // namespace

void write_cube(const fs::path& header, const Cube& cube) {
    const fs::path bin_name = header.stem().string() + ".bin";
    const fs::path bin_path = header.parent_path() / bin_name;
    const json h = {{"n1", cube.n1()},
                    {"n2", cube.n2()},
                    {"n", cube.n()},
                    {"T", cube.grid().horizon()},
                    {"dtype", "f64"},
                    {"order", "t-major row-major"},
                    {"endianness", "little"},
                    {"data", bin_name.string()}};
    write_text_file(header, h.dump(2) + "\n");

    std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + bin_path.string() + "'");
    std::vector<std::uint64_t> raw(cube.size());
    const auto d = cube.data();
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_little(std::bit_cast<std::uint64_t>(d[i]));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 8));
    if (!out) throw IoError("failed writing '" + bin_path.string() + "'");
}

Cube read_cube(const fs::path& header) {
    json h;
    try {
        h = json::parse(read_text(header));
    } catch (const json::parse_error& e) {
        throw IoError("cube header '" + header.string() + "' is not valid JSON: " + e.what());
    }
    if (!h.is_object()) throw IoError("cube header '" + header.string() + "' is not a JSON object");
    const auto n1 = require_field<std::int64_t>(h, "n1", header);
    const auto n2 = require_field<std::int64_t>(h, "n2", header);
    const auto n = require_field<std::int64_t>(h, "n", header);
    const auto T = require_field<double>(h, "T", header);
    if (n1 <= 0 || n2 <= 0 || n <= 0 || !(T > 0.0) || !std::isfinite(T))
        throw IoError("cube header '" + header.string() + "' has non-positive sizes or horizon");
    if (require_field<std::string>(h, "dtype", header) != "f64")
        throw IoError("cube header '" + header.string() + "': only dtype f64 is supported");
    if (require_field<std::string>(h, "order", header) != "t-major row-major")
        throw IoError("cube header '" + header.string() + "': unsupported order");
    if (require_field<std::string>(h, "endianness", header) != "little")
        throw IoError("cube header '" + header.string() + "': only little-endian data is supported");
    const fs::path bin_name = h.contains("data") ? fs::path(require_field<std::string>(h, "data", header))
                                                 : fs::path(header.stem().string() + ".bin");
    const fs::path bin_path = header.parent_path() / bin_name;

    const auto count = static_cast<std::uintmax_t>(n) * static_cast<std::uintmax_t>(n1) * static_cast<std::uintmax_t>(n2);
    std::error_code ec;
    const auto bytes = fs::file_size(bin_path, ec);
    if (ec) throw IoError("cannot stat cube data '" + bin_path.string() + "'");
    if (bytes != 8 * count)
        throw IoError("cube data '" + bin_path.string() + "' has " + std::to_string(bytes) + " bytes, header implies " +
                      std::to_string(8 * count));

    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + bin_path.string() + "'");
    std::vector<std::uint64_t> raw(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("failed reading '" + bin_path.string() + "'");
    std::vector<double> values(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) values[i] = std::bit_cast<double>(to_little(raw[i]));
    return Cube(TimeGrid(static_cast<std::size_t>(n), T), static_cast<std::size_t>(n1), static_cast<std::size_t>(n2),
                std::move(values));
}

Series read_series(const fs::path& path) {
    Series s;
    for (const auto& [t, v] : read_two_columns(path)) {
        if (!s.t.empty() && !(t > s.t.back()))
            throw IoError("'" + path.string() + "': time column is not strictly increasing");
        s.t.push_back(t);
        s.values.push_back(v);
    }
    return s;
}

void write_series(const fs::path& path, const Series& series) {
    if (series.t.size() != series.values.size()) throw InvalidArgument("series columns differ in length");
    std::string text = "t,value\n";
    for (std::size_t k = 0; k < series.t.size(); ++k) text += fmt17(series.t[k]) + "," + fmt17(series.values[k]) + "\n";
    write_text_file(path, text);
}

TimeGrid grid_of(const Series& series) {
    const std::size_t n = series.t.size();
    if (n == 0) throw InvalidArgument("empty series");
    const TimeGrid grid(n, series.t.back());
    const double tol = 1e-9 * grid.horizon();
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(series.t[k] - grid.point(k)) > tol)
            throw InvalidArgument("series is not sampled on the uniform grid t_k = T k / n (k = 1..n)");
    return grid;
}

LagCoeffs read_coeffs(const fs::path& path) {
    std::vector<double> v;
    for (const auto& [l, c] : read_two_columns(path)) {
        if (l != static_cast<double>(v.size()))
            throw IoError("'" + path.string() + "': coefficient indices must run 0, 1, 2, ...");
        v.push_back(c);
    }
    return LagCoeffs(std::move(v));
}

void write_coeffs(const fs::path& path, const LagCoeffs& coeffs) {
    std::string text = "l,value\n";
    for (std::size_t l = 0; l < coeffs.size(); ++l) text += std::to_string(l) + "," + fmt17(coeffs[l]) + "\n";
    write_text_file(path, text);
}

json to_json(const Diagnostics& d) {
    return {{"eps", d.eps},
            {"eps_hat", d.eps_hat},
            {"sigma_hat", d.sigma_hat},
            {"M", d.M},
            {"J1", d.J1},
            {"J2", d.J2},
            {"work_n1", d.work_n1},
            {"work_n2", d.work_n2},
            {"thresholds", d.thresholds},
            {"keep_counts", d.keep_counts},
            {"warnings", d.warnings}};
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
    out << "function,snr,mean_delta,stderr,runs,seed,published_mean,published_stderr,ratio\n";
    for (const auto& r : rows) {
        out << to_string(r.function) << ',' << fmt17(r.snr) << ',' << fmt17(r.mean_delta) << ',' << fmt17(r.stderr_)
            << ',' << r.runs << ',' << r.seed << ',';
        if (r.published) out << fmt17(r.published->mean) << ',' << fmt17(r.published->stderr_) << ',' << fmt17(r.mean_delta / r.published->mean);
        else out << ",,";
        out << '\n';
    }
}

void write_norms_csv(std::ostream& out, const InverseNormTable& norms) {
    out << "m,spectral,frobenius\n";
    for (std::size_t m = 1; m <= norms.max_m; ++m)
        out << m << ',' << fmt17(norms.spectral[m]) << ',' << fmt17(norms.frobenius[m]) << '\n';
}

double loglog_slope(const std::vector<double>& y, std::size_t m_first, std::size_t m_last) {
    if (m_first == 0 || m_last <= m_first || m_last >= y.size()) throw InvalidArgument("slope fit needs a valid m range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double cnt = static_cast<double>(m_last - m_first + 1);
    for (std::size_t m = m_first; m <= m_last; ++m) {
        const double lx = std::log(static_cast<double>(m));
        const double ly = std::log(y[m]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace wavelag
