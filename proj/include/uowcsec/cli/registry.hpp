// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file registry.hpp
//! Turbulence parameter registry: (water, bubble level, temperature gradient)
//! to the (omega, lambda, a, b, c) parameters of the optical channel.
//!
//! File format (sectioned key = value, ';' or '#' comments):
//!
//!     [registry."fresh/2.4/0.05"]
//!     omega = 0.2082
//!     lambda = 0.2688
//!     a = 1.656
//!     b = 0.9412038338
//!     c = 1.648
//!     provenance = placeholder

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uowcsec/errors.hpp"

namespace uowcsec::cli {

struct TurbulenceKey {
  std::string water = "fresh";  // "fresh" or "salty"
  double h = 0.0;               // air-bubble level, L/min
  double l = 0.0;               // temperature gradient, degC/cm

  [[nodiscard]] bool matches(const TurbulenceKey& o) const {
    return water == o.water && std::abs(h - o.h) < 1e-9 && std::abs(l - o.l) < 1e-9;
  }
  [[nodiscard]] std::string address() const {
    std::ostringstream os;
    os << water << '/' << h << '/' << l;
    return os.str();
  }
};

struct TurbulenceRegistryEntry {
  TurbulenceKey key;
  double omega = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::string provenance;

  [[nodiscard]] bool is_placeholder() const { return provenance.empty() || provenance == "placeholder"; }
};

/// Parses "fresh/2.4/0.05".
inline TurbulenceKey parse_turbulence_key(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, '/');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("registry key '" + text + "' is not of the form water/h/l");
  TurbulenceKey k;
  k.water = parts[0];
  if (k.water != "fresh" && k.water != "salty") {
    throw ConfigError("registry key '" + text + "': water must be 'fresh' or 'salty'");
  }
  try {
    std::size_t used = 0;
    k.h = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("h");
    k.l = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("l");
  } catch (const std::exception&) {
    throw ConfigError("registry key '" + text + "': h and l must be numbers");
  }
  if (k.h < 0.0 || k.l < 0.0) throw ConfigError("registry key '" + text + "': h and l must be >= 0");
  return k;
}

class Registry {
 public:
  Registry() = default;

  /// Parses registry text; `origin` names the source in error messages.
  static Registry parse(const std::string& text, const std::string& origin = "registry") {
    boost::property_tree::ptree tree;
    std::istringstream in(strip_hash_comments(text));
    try {
      boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    Registry reg;
    for (const auto& [section, body] : tree) {
      const std::string prefix = "registry.\"";
      if (section.rfind(prefix, 0) != 0 || section.back() != '"') {
        throw ConfigError(origin + ": section [" + section + "] is not of the form [registry.\"water/h/l\"]");
      }
      TurbulenceRegistryEntry e;
      e.key = parse_turbulence_key(section.substr(prefix.size(), section.size() - prefix.size() - 1));
      const std::string where = origin + " [" + section + "]";
      for (const auto& [name, value] : body) {
        const std::string v = value.data();
        if (name == "provenance") {
          e.provenance = v;
        } else if (name == "omega") {
          e.omega = number(v, where, name);
        } else if (name == "lambda") {
          e.lambda = number(v, where, name);
        } else if (name == "a") {
          e.a = number(v, where, name);
        } else if (name == "b") {
          e.b = number(v, where, name);
        } else if (name == "c") {
          e.c = number(v, where, name);
        } else {
          throw ConfigError(where + ": unknown key '" + name + "'");
        }
      }
      check(e, where);
      for (const auto& other : reg.entries_) {
        if (other.key.matches(e.key)) throw ConfigError(where + ": duplicate registry key " + e.key.address());
      }
      reg.entries_.push_back(e);
    }
    return reg;
  }

  static Registry load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read registry file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  [[nodiscard]] const std::vector<TurbulenceRegistryEntry>& entries() const { return entries_; }

  [[nodiscard]] const TurbulenceRegistryEntry* find(const TurbulenceKey& k) const {
    for (const auto& e : entries_) {
      if (e.key.matches(k)) return &e;
    }
    return nullptr;
  }

  [[nodiscard]] const TurbulenceRegistryEntry& lookup(const TurbulenceKey& k) const {
    if (const auto* e = find(k)) return *e;
    std::string known;
    for (const auto& e : entries_) known += (known.empty() ? "" : ", ") + e.key.address();
    throw ConfigError("no registry entry for " + k.address() + " (known: " + known + ")");
  }

  /// Human-readable concerns about the data: placeholders and implausible values.
  [[nodiscard]] std::vector<std::string> provenance_warnings() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
      if (e.is_placeholder()) out.push_back("registry entry " + e.key.address() + " is a placeholder");
      if (e.omega > 0.999 || e.omega < 0.001) {
        out.push_back("registry entry " + e.key.address() + " has an implausible omega = " + std::to_string(e.omega));
      }
    }
    return out;
  }

 private:
  // read_ini only knows ';' comments.
  static std::string strip_hash_comments(const std::string& text) {
    std::istringstream in(text);
    std::string out;
    for (std::string line; std::getline(in, line);) {
      const auto first = line.find_first_not_of(" \t");
      if (first != std::string::npos && line[first] == '#') line = ";" + line;
      out += line;
      out += '\n';
    }
    return out;
  }

  static double number(const std::string& v, const std::string& where, const std::string& name) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(name);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(where + ": '" + name + "' must be a number, got '" + v + "'");
    }
  }

  static void check(const TurbulenceRegistryEntry& e, const std::string& where) {
    if (!(e.omega > 0.0 && e.omega < 1.0)) throw ConfigError(where + ": omega must lie in (0, 1)");
    for (auto [v, name] : {std::pair{e.lambda, "lambda"}, {e.a, "a"}, {e.b, "b"}, {e.c, "c"}}) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(where + ": " + name + " must be positive");
    }
  }

  std::vector<TurbulenceRegistryEntry> entries_;
};

}  // namespace uowcsec::cli
