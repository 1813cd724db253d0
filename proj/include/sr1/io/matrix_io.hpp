#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sr1/core/matrix.hpp"

namespace sr1::io {

enum class MatrixFormat { CsvComplex, RawBinary, PgmImage };

inline MatrixFormat parse_matrix_format(const std::string& s) {
  if (s == "csv" || s == "csvComplex") return MatrixFormat::CsvComplex;
  if (s == "bin" || s == "rawBinary") return MatrixFormat::RawBinary;
  if (s == "pgm" || s == "pgmImage") return MatrixFormat::PgmImage;
  throw Error(ErrorCode::InvalidSpec, "unknown matrix format '" + s + "'");
}

/// Guess from the extension: .pgm, .bin/.sr1m, anything else is CSV.
inline MatrixFormat format_from_path(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return MatrixFormat::PgmImage;
  if (ext == ".bin" || ext == ".sr1m") return MatrixFormat::RawBinary;
  return MatrixFormat::CsvComplex;
}

// ---- complex CSV ---------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

/// Parse "a", "bi", "a+bi" or "a-bi" (i or j, optional surrounding spaces).
inline Complex parse_complex(std::string_view text) {
  const std::string_view s = detail::trim(text);
  auto fail = [&] { return Error(ErrorCode::Parse, "bad complex number '" + std::string(text) + "'"); };
  if (s.empty()) throw fail();
  double re = 0.0, im = 0.0;
  if (s.back() != 'i' && s.back() != 'j') {
    if (!detail::parse_real(s, re)) throw fail();
    return {re, 0.0};
  }
  const std::string_view body = s.substr(0, s.size() - 1);
  // split at the last sign that is not leading and not an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    if (!detail::parse_real(body, im)) throw fail();
    return {0.0, im};
  }
  std::string_view imag = body.substr(split);
  if (!detail::parse_real(detail::trim(body.substr(0, split)), re)) throw fail();
  if (imag == "+") im = 1.0;
  else if (imag == "-") im = -1.0;
  else if (!detail::parse_real(imag, im)) throw fail();
  return {re, im};
}

/// "a" for real entries, else "a+bi"/"a-bi", with 17 significant digits.
inline std::string format_complex(Complex z) {
  char buf[80];
  if (z.imag() == 0.0 && !std::signbit(z.imag())) std::snprintf(buf, sizeof buf, "%.17g", z.real());
  else std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline ComplexMatrix read_csv(std::istream& is) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
    std::vector<Complex> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_complex(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::Parse, "ragged CSV at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::Parse, "empty CSV matrix");
  ComplexMatrix a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) a(i, k) = rows[i][k];
  return a;
}

inline void write_csv(std::ostream& os, const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (k) os << ',';
      os << format_complex(a(i, k));
    }
    os << '\n';
  }
}

// ---- raw binary ----------------------------------------------------------

namespace detail {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::Parse, "truncated binary matrix");
  return to_little(v);
}

}  // namespace detail

inline constexpr char kBinaryMagic[4] = {'S', 'R', '1', 'M'};

inline ComplexMatrix read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw Error(ErrorCode::Parse, "missing SR1M magic");
  const auto m = detail::get<std::uint32_t>(is);
  const auto n = detail::get<std::uint32_t>(is);
  if (m == 0 || n == 0) throw Error(ErrorCode::Parse, "binary matrix has a zero dimension");
  ComplexMatrix a(m, n);
  for (auto& z : a.data()) {
    const double re = detail::get<double>(is);
    z = {re, detail::get<double>(is)};
  }
  return a;
}

inline void write_binary(std::ostream& os, const ComplexMatrix& a) {
  os.write(kBinaryMagic, 4);
  detail::put(os, static_cast<std::uint32_t>(a.rows()));
  detail::put(os, static_cast<std::uint32_t>(a.cols()));
  for (const auto& z : a.data()) {
    detail::put(os, z.real());
    detail::put(os, z.imag());
  }
}

// ---- PGM (P5) ------------------------------------------------------------

namespace detail {

inline std::size_t pgm_field(std::istream& is) {
  for (;;) {
    const int c = is.peek();
    if (c == '#') {
      std::string skip;
      std::getline(is, skip);
    } else if (c != EOF && std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
  std::size_t v = 0;
  if (!(is >> v)) throw Error(ErrorCode::Parse, "bad PGM header");
  return v;
}

}  // namespace detail

/// Width becomes N (columns), height M (rows); gray levels map to [0, 1].
inline ComplexMatrix read_pgm(std::istream& is) {
  char magic[2];
  if (!is.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw Error(ErrorCode::Parse, "not a P5 PGM");
  const std::size_t width = detail::pgm_field(is), height = detail::pgm_field(is), maxval = detail::pgm_field(is);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) throw Error(ErrorCode::Parse, "bad PGM header");
  is.get();  // single whitespace before the raster
  ComplexMatrix a(height, width);
  const bool wide = maxval > 255;
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t k = 0; k < width; ++k) {
      unsigned char b[2] = {0, 0};
      if (!is.read(reinterpret_cast<char*>(b), wide ? 2 : 1)) throw Error(ErrorCode::Parse, "truncated PGM raster");
      const unsigned v = wide ? (unsigned{b[0]} << 8 | b[1]) : b[0];
      a(i, k) = static_cast<double>(v) / static_cast<double>(maxval);
    }
  return a;
}

/// Real parts clamped to [0, 1], 8-bit.
inline void write_pgm(std::ostream& os, const ComplexMatrix& a) {
  os << "P5\n" << a.cols() << ' ' << a.rows() << "\n255\n";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = std::clamp(a(i, k).real(), 0.0, 1.0);
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
}

// ---- files ---------------------------------------------------------------

inline ComplexMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Parse, "cannot open '" + path.string() + "'");
  switch (format) {
    case MatrixFormat::CsvComplex: return read_csv(is);
    case MatrixFormat::RawBinary: return read_binary(is);
    case MatrixFormat::PgmImage: return read_pgm(is);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown format");
}

inline ComplexMatrix read_matrix(const std::filesystem::path& path) { return read_matrix(path, format_from_path(path)); }

inline void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a, MatrixFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Parse, "cannot write '" + path.string() + "'");
  switch (format) {
    case MatrixFormat::CsvComplex: write_csv(os, a); break;
    case MatrixFormat::RawBinary: write_binary(os, a); break;
    case MatrixFormat::PgmImage: write_pgm(os, a); break;
  }
}

inline void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a) {
  write_matrix(path, a, format_from_path(path));
}

/// A vector is an M x 1 matrix in any of the formats.
inline ComplexVector read_vector(const std::filesystem::path& path, MatrixFormat format) {
  const ComplexMatrix a = read_matrix(path, format);
  if (a.cols() != 1 && a.rows() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a vector file");
  return {a.data().begin(), a.data().end()};
}

inline void write_vector(const std::filesystem::path& path, std::span<const Complex> x, MatrixFormat format) {
  ComplexMatrix a(x.size(), 1);
  std::copy(x.begin(), x.end(), a.data().begin());
  write_matrix(path, a, format);
}

}  // namespace sr1::io
