#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "power_sums.hpp"
#include "root_set.hpp"

namespace allroots {

namespace detail {

// 17 significant digits: value-faithful for the 53-bit tier and within half
// an ulp of the extended tier.
inline std::string format_real(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}
inline std::string format_real(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16Le", x);
  return buf;
}

inline void parse_real(const char* s, char** end, double& out) { out = std::strtod(s, end); }
inline void parse_real(const char* s, char** end, long double& out) { out = std::strtold(s, end); }

template <class Real>
inline Real parse_field(const std::string& text, std::size_t line, const char*& cursor) {
  char* end = nullptr;
  Real v{};
  parse_real(cursor, &end, v);
  if (end == cursor) throw parse_error("expected a numeric field in '" + text + "'", line);
  cursor = end;
  return v;
}

}  // namespace detail

template <class Real>
struct RootRecord {
  Cx<Real> z{};
  Real inclusion_radius{0};
  std::int64_t hit_count{0};
};

/// @brief Root list, one root per line: re im inclusionRadius hitCount.
template <class Real>
inline void write_roots(std::ostream& os, const RootSet<Real>& rs) {
  for (const auto& e : rs.entries()) {
    os << detail::format_real(e.z.real()) << ' ' << detail::format_real(e.z.imag()) << ' '
       << detail::format_real(e.inclusion_radius) << ' ' << e.hit_count << '\n';
  }
}

template <class Real>
inline void write_roots_file(const std::string& path, const RootSet<Real>& rs) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_roots(os, rs);
}

/// @brief Parse a root list. Blank lines and lines starting with '#' are
/// skipped; anything else must carry the four fields.
template <class Real>
inline std::vector<RootRecord<Real>> read_roots(std::istream& is) {
  std::vector<RootRecord<Real>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const char* cursor = line.c_str();
    RootRecord<Real> rec;
    const Real re = detail::parse_field<Real>(line, lineno, cursor);
    const Real im = detail::parse_field<Real>(line, lineno, cursor);
    rec.z = Cx<Real>(re, im);
    rec.inclusion_radius = detail::parse_field<Real>(line, lineno, cursor);
    char* end = nullptr;
    rec.hit_count = std::strtoll(cursor, &end, 10);
    if (end == cursor) throw parse_error("expected a hit count in '" + line + "'", lineno);
    out.push_back(rec);
  }
  return out;
}

template <class Real>
inline std::vector<RootRecord<Real>> read_roots_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_roots<Real>(is);
}

/// @brief Power-sum exchange lines: k re im, k ascending from 1.
template <class Real>
inline void write_sums(std::ostream& os, std::span<const Cx<Real>> b) {
  for (std::size_t k = 1; k <= b.size(); ++k)
    os << k << ' ' << detail::format_real(b[k - 1].real()) << ' '
       << detail::format_real(b[k - 1].imag()) << '\n';
}

template <class Real>
inline std::vector<Cx<Real>> read_sums(std::istream& is) {
  std::vector<Cx<Real>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const char* cursor = line.c_str();
    char* end = nullptr;
    const long long k = std::strtoll(cursor, &end, 10);
    if (end == cursor) throw parse_error("expected a sum order in '" + line + "'", lineno);
    cursor = end;
    const Real re = detail::parse_field<Real>(line, lineno, cursor);
    const Real im = detail::parse_field<Real>(line, lineno, cursor);
    if (k != (long long)(out.size()) + 1)
      throw parse_error("sum orders must be 1, 2, ... without gaps", lineno);
    out.emplace_back(re, im);
  }
  return out;
}

template <class Real>
inline std::vector<Cx<Real>> read_sums_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_sums<Real>(is);
}

/// @brief Verification report CSV: k, theoretical sum (Gaussian-integer
/// text), empirical sum, residual.
template <class Real>
inline void write_report_csv(std::ostream& os, const PowerSumReport<Real>& rep) {
  os << "k,a_k,empirical_re,empirical_im,residual\n";
  for (int k = 1; k <= rep.m; ++k) {
    os << k << ',' << to_string(rep.theoretical[std::size_t(k - 1)]) << ','
       << detail::format_real(rep.empirical[std::size_t(k - 1)].real()) << ','
       << detail::format_real(rep.empirical[std::size_t(k - 1)].imag()) << ','
       << detail::format_real(rep.residuals[std::size_t(k - 1)]) << '\n';
  }
}

template <class Real>
inline void write_report_csv_file(const std::string& path, const PowerSumReport<Real>& rep) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_report_csv(os, rep);
}

}  // namespace allroots
