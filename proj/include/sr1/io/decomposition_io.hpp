#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sr1/decomposer.hpp"

//
// Decomposition files are JSON:
//
//   {"format": "sr1-decomposition", "version": 1, "M": .., "N": ..,
//    "components": [{"sigma": .., "u": [[re, im], ..], "v": [[re, im], ..],
//                    "lambda": [..]}],
//    "residualHistory": [..]}
//
// Doubles are written in shortest round-trip form, so load(save(d)) == d.
//
namespace sr1::io {

inline constexpr int kDecompositionVersion = 1;

namespace detail {

using nlohmann::json;

inline json complex_array(std::span<const Complex> x) {
  json out = json::array();
  for (const auto& z : x) out.push_back({z.real(), z.imag()});
  return out;
}

inline ComplexVector complex_vector(const json& j, std::size_t expected, const char* what) {
  if (!j.is_array() || j.size() != expected)
    throw Error(ErrorCode::Parse, std::string(what) + " has the wrong length");
  ComplexVector out;
  out.reserve(expected);
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(ErrorCode::Parse, std::string(what) + " entries must be [re, im] pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const Decomposition& d) {
  using detail::json;
  json comps = json::array();
  for (const auto& c : d.components) {
    json lambda = json::array();
    for (std::size_t k = 0; k < c.lambda.size(); ++k) lambda.push_back(c.lambda[k]);
    comps.push_back({{"sigma", c.sigma},
                     {"u", detail::complex_array(c.u)},
                     {"v", detail::complex_array(c.v)},
                     {"lambda", std::move(lambda)}});
  }
  return {{"format", "sr1-decomposition"},
          {"version", kDecompositionVersion},
          {"M", d.rows},
          {"N", d.cols},
          {"components", std::move(comps)},
          {"residualHistory", d.residual_history}};
}

inline Decomposition from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "decomposition must be a JSON object");
    if (j.value("version", 0) != kDecompositionVersion) throw Error(ErrorCode::Parse, "unsupported version");
    Decomposition d;
    d.rows = j.at("M").get<std::size_t>();
    d.cols = j.at("N").get<std::size_t>();
    if (d.rows == 0 || d.cols == 0) throw Error(ErrorCode::Parse, "dimensions must be positive");
    for (const auto& jc : j.at("components")) {
      Component c;
      c.sigma = jc.at("sigma").get<double>();
      c.u = detail::complex_vector(jc.at("u"), d.rows, "u");
      c.v = detail::complex_vector(jc.at("v"), d.cols, "v");
      const auto& jl = jc.at("lambda");
      if (!jl.is_array() || jl.size() != d.cols) throw Error(ErrorCode::Parse, "lambda has the wrong length");
      c.lambda = ShiftVector(d.rows, d.cols);
      for (std::size_t k = 0; k < d.cols; ++k) {
        const auto s = jl[k].get<std::int64_t>();
        if (s < 0 || static_cast<std::size_t>(s) >= d.rows) throw Error(ErrorCode::Parse, "lambda entry out of range");
        c.lambda.set(k, s);
      }
      d.components.push_back(std::move(c));
    }
    d.residual_history = j.at("residualHistory").get<std::vector<double>>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline void save_decomposition(const std::filesystem::path& path, const Decomposition& d) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Parse, "cannot write '" + path.string() + "'");
  os << to_json(d).dump(1) << '\n';
}

inline Decomposition load_decomposition(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Parse, "cannot open '" + path.string() + "'");
  try {
    return from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

/// component_index,column_index,shift for every component and column.
inline void write_tracks(std::ostream& os, const Decomposition& d) {
  os << "component_index,column_index,shift\n";
  for (std::size_t l = 0; l < d.components.size(); ++l)
    for (std::size_t k = 0; k < d.components[l].lambda.size(); ++k)
      os << l << ',' << k << ',' << d.components[l].lambda[k] << '\n';
}

}  // namespace sr1::io
