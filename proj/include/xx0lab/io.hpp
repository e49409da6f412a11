#pragma once

// Text, CSV and JSON forms. Pauli strings use the compact form
// "c * X1 Y3 Z7" (coefficient, then axis+site tokens; M/P are the
// lowering/raising factors, I the identity). Doubles print at 17
// significant digits so output round-trips and repeated runs are
// byte-identical.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xx0lab/pauli.hpp"
#include "xx0lab/xx0.hpp"

namespace xx0lab {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_coeff(cdouble c) {
  if (c.imag() == 0.0) return format_double(c.real());
  return "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
}

inline std::string pauli_string_to_text(const PauliString& p) {
  std::string out = format_coeff(p.coeff) + " *";
  if (p.factors.empty()) return out + " I";
  for (const auto& f : p.factors) {
    out += ' ';
    out += axis_letter(f.axis);
    out += std::to_string(f.site);
  }
  return out;
}

inline std::string local_operator_to_text(const LocalOperator& op) {
  if (op.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < op.terms.size(); ++i) {
    if (i) out += " + ";
    out += pauli_string_to_text(op.terms[i]);
  }
  return out;
}

namespace detail {

inline cdouble parse_coeff_token(const std::string& tok) {
  if (!tok.empty() && tok.front() == '(') {
    double re = 0, im = 0;
    if (std::sscanf(tok.c_str(), "(%lf,%lf)", &re, &im) != 2)
      throw std::invalid_argument("bad complex coefficient: " + tok);
    return {re, im};
  }
  std::size_t pos = 0;
  const double re = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad coefficient: " + tok);
  return {re, 0.0};
}

inline Axis parse_axis_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'X': return Axis::x;
    case 'Y': return Axis::y;
    case 'Z': return Axis::z;
    case 'M': return Axis::minus;
    case 'P': return Axis::plus;
  }
  throw std::invalid_argument(std::string("bad axis letter: ") + c);
}

}  // namespace detail

inline PauliString parse_pauli_string(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  if (toks.empty()) throw std::invalid_argument("empty Pauli string");
  PauliString p;
  std::size_t i = 0;
  if (toks.size() >= 2 && toks[1] == "*") {
    p.coeff = detail::parse_coeff_token(toks[0]);
    i = 2;
  }
  for (; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "I" || t == "i") continue;
    const Axis ax = detail::parse_axis_letter(t[0]);
    if (t.size() < 2) throw std::invalid_argument("factor needs a site: " + t);
    const int site = std::stoi(t.substr(1));
    p.factors.push_back({site, ax});
  }
  p.canonicalize();
  return p;
}

/// Terms separated by " + " (spaces required, so complex exponents survive).
inline LocalOperator parse_local_operator(const std::string& text) {
  LocalOperator op;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t sep = text.find(" + ", start);
    const std::string piece = text.substr(start, sep == std::string::npos ? sep : sep - start);
    if (piece == "0" && op.terms.empty() && sep == std::string::npos) return op;
    op.terms.push_back(parse_pauli_string(piece));
    if (sep == std::string::npos) break;
    start = sep + 3;
  }
  return op;
}

inline ordered_json eigenstate_to_json(const EigenState& s) {
  ordered_json j;
  j["n"] = s.n();
  j["h"] = s.h;
  j["m"] = s.m();
  j["momentum_indices"] = s.momenta.indices;
  j["spinwave_energy"] = s.spinwave_energy;
  j["hamiltonian_energy"] = s.hamiltonian_energy;
  return j;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
      }
      out += '\n';
    }
    return out;
  }
};

/// Writes to the given path, or to standard output when the path is empty.
inline void emit_text(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Little-endian complex-double amplitude dump, states concatenated.
inline void write_vectors_binary(const std::vector<StateVector>& states,
                                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  for (const auto& v : states)
    out.write(reinterpret_cast<const char*>(v.amp.data()),
              static_cast<std::streamsize>(sizeof(cdouble) * v.amp.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace xx0lab
