#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The mup authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "mup/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace mup {

/// Arbitrary-precision integer and rational. All welfare arithmetic in the
/// library is exact; doubles appear only in display helpers.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

namespace detail {

inline Int parse_int_digits(std::string_view s)
{
  if (s.empty())
  {
    throw ParseError("expected digits");
  }
  Int out = 0;
  for (char c : s)
  {
    if (!std::isdigit(static_cast<unsigned char>(c)))
    {
      throw ParseError("unexpected character '" + std::string(1, c) + "'");
    }
    out = out * 10 + (c - '0');
  }
  return out;
}

inline Int pow10(std::size_t k)
{
  Int out = 1;
  for (std::size_t i = 0; i < k; ++i)
  {
    out *= 10;
  }
  return out;
}

}  // namespace detail

/// Parses "7", "-3/2", "+1.25", ".5". Fraction and decimal forms are exact;
/// no rounding ever happens. Throws ParseError on anything else.
inline Rat parse_rat(std::string_view s)
{
  auto const is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front()))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back()))
  {
    s.remove_suffix(1);
  }
  if (s.empty())
  {
    throw ParseError("empty rational literal");
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-')
  {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rat value;
  if (auto const slash = s.find('/'); slash != std::string_view::npos)
  {
    std::string_view const num = s.substr(0, slash);
    std::string_view const den = s.substr(slash + 1);
    if (num.find('.') != std::string_view::npos || den.find('.') != std::string_view::npos)
    {
      throw ParseError("fraction parts must be integers: '" + std::string(s) + "'");
    }
    Int const d = detail::parse_int_digits(den);
    if (d == 0)
    {
      throw ParseError("zero denominator in '" + std::string(s) + "'");
    }
    value = Rat(detail::parse_int_digits(num), d);
  }
  else if (auto const dot = s.find('.'); dot != std::string_view::npos)
  {
    std::string_view const whole = s.substr(0, dot);
    std::string_view const frac  = s.substr(dot + 1);
    if (whole.empty() && frac.empty())
    {
      throw ParseError("bare '.' is not a rational");
    }
    Int const scale = detail::pow10(frac.size());
    Int numerator   = whole.empty() ? Int(0) : detail::parse_int_digits(whole);
    numerator *= scale;
    if (!frac.empty())
    {
      numerator += detail::parse_int_digits(frac);
    }
    value = Rat(numerator, scale);
  }
  else
  {
    value = Rat(detail::parse_int_digits(s));
  }
  return negative ? Rat(-value) : value;
}

/// Canonical text form: "p" when the denominator is 1, else "p/q" in lowest
/// terms with q > 0. parse_rat(rat_to_string(x)) == x for every x.
inline std::string rat_to_string(Rat const &x)
{
  std::string out = numerator(x).str();
  if (denominator(x) != 1)
  {
    out += "/" + denominator(x).str();
  }
  return out;
}

/// Display-only conversion.
inline double rat_to_double(Rat const &x)
{
  return x.convert_to<double>();
}

/// floor(x) as an exact integer.
inline Int rat_floor(Rat const &x)
{
  Int q = numerator(x) / denominator(x);  // truncates toward zero
  if (numerator(x) < 0 && q * denominator(x) != numerator(x))
  {
    --q;
  }
  return q;
}

/// ceil(x) as an exact integer.
inline Int rat_ceil(Rat const &x)
{
  return -rat_floor(Rat(-x));
}

inline Rat rat_abs(Rat const &x)
{
  return x < 0 ? Rat(-x) : x;
}

inline Rat rat_min(Rat const &a, Rat const &b)
{
  return a < b ? a : b;
}

inline Rat rat_max(Rat const &a, Rat const &b)
{
  return a > b ? a : b;
}

/// Sum of a range of rationals (empty sum is 0).
inline Rat rat_sum(std::vector<Rat> const &xs)
{
  Rat out = 0;
  for (auto const &x : xs)
  {
    out += x;
  }
  return out;
}

}  // namespace mup
