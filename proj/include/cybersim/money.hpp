#pragma once

// Currency text: "53.1e6", "53.1mn", "250k", "1,000,000", "$2.5mn".

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "cybersim/error.hpp"

namespace cybersim {

/// Exact amount in cents.
struct Money {
  std::int64_t cents = 0;

  double dollars() const { return static_cast<double>(cents) / 100.0; }
  static Money from_dollars(double v) {
    if (!std::isfinite(v) || std::fabs(v) > 9.0e16) throw DomainError("money: amount out of range");
    return Money{std::llround(v * 100.0)};
  }
  friend bool operator==(const Money&, const Money&) = default;
};

inline Money parse_money(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ',' && c != '_' && c != '$' && !std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw DomainError("money: empty amount");

  double scale = 1.0;
  auto ends_with = [&](std::string_view suffix) {
    if (s.size() <= suffix.size()) return false;
    for (std::size_t i = 0; i < suffix.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) != suffix[i]) return false;
    return true;
  };
  if (ends_with("mn")) {
    scale = 1e6;
    s.resize(s.size() - 2);
  } else if (ends_with("m")) {
    scale = 1e6;
    s.resize(s.size() - 1);
  } else if (ends_with("bn")) {
    scale = 1e9;
    s.resize(s.size() - 2);
  } else if (ends_with("k")) {
    scale = 1e3;
    s.resize(s.size() - 1);
  }

  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("money: cannot parse '" + std::string(text) + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw DomainError("money: cannot parse '" + std::string(text) + "'");
  return Money::from_dollars(v * scale);
}

/// Parsed amount in dollars, rounded to the cent.
inline double parse_currency(std::string_view text) { return parse_money(text).dollars(); }

}  // namespace cybersim
