#include "hrbc/rational.hpp"

#include <cctype>
#include <limits>

namespace hrbc {
namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool mul_overflows(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  return __builtin_mul_overflow(a, b, &out);
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  bool any_digit = false;
  auto push_digit = [&](char c) {
    if (mul_overflows(numerator, 10)) return false;
    numerator *= 10;
    const std::int64_t d = c - '0';
    if (numerator > kMax - d) return false;
    numerator += d;
    return true;
  };
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    if (!push_digit(text[i])) return std::nullopt;
    any_digit = true;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (!push_digit(text[i])) return std::nullopt;
      if (mul_overflows(denominator, 10)) return std::nullopt;
      denominator *= 10;
      any_digit = true;
      ++i;
    }
  }
  if (!any_digit) return std::nullopt;
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    bool exp_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 18) return std::nullopt;
      exp_digit = true;
      ++i;
    }
    if (!exp_digit) return std::nullopt;
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) return std::nullopt;
  Rational value(numerator, denominator);
  for (int k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) {
    if (exponent > 0) {
      if (mul_overflows(value.numerator(), 10)) return std::nullopt;
      value *= 10;
    } else {
      if (mul_overflows(value.denominator(), 10)) return std::nullopt;
      value /= 10;
    }
  }
  return negative ? -value : value;
}

std::string format_rational(const Rational& value) {
  const std::int64_t num = value.numerator();
  std::int64_t den = value.denominator();
  std::int64_t twos = 0;
  std::int64_t fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    return std::to_string(num) + "/" + std::to_string(value.denominator());
  }
  const std::int64_t digits = twos > fives ? twos : fives;
  // Scale to num' / 10^digits.
  __int128 scaled = num;
  for (std::int64_t k = twos; k < digits; ++k) scaled *= 2;
  for (std::int64_t k = fives; k < digits; ++k) scaled *= 5;
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string text;
  if (scaled == 0) text = "0";
  while (scaled > 0) {
    text.insert(text.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  if (digits > 0) {
    while (static_cast<std::int64_t>(text.size()) <= digits) text.insert(text.begin(), '0');
    text.insert(text.end() - digits, '.');
  }
  return negative ? "-" + text : text;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

bool is_integer(const Rational& value) { return value.denominator() == 1; }

Rational truncate(const Rational& value) {
  return Rational(value.numerator() / value.denominator());
}

}  // namespace hrbc
