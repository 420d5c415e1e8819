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
#include "mup/rational.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace mup {

/// Valuation classes over identical items, ordered from most to least
/// restrictive. Each class contains the previous one.
enum class ValClass
{
  Additive,
  Submodular,
  Xos,
  Subadditive,
  General
};

inline char const *to_string(ValClass c)
{
  switch (c)
  {
  case ValClass::Additive:
    return "additive";
  case ValClass::Submodular:
    return "submodular";
  case ValClass::Xos:
    return "xos";
  case ValClass::Subadditive:
    return "subadditive";
  default:
    return "general";
  }
}

/// A symmetric valuation over m identical items: the sequence
/// v(0), v(1), ..., v(m) with v(0) = 0 and v non-decreasing.
class Valuation
{
public:
  /// Validates normalization (v(0) = 0) and monotonicity.
  explicit Valuation(std::vector<Rat> values)
    : v_(std::move(values))
  {
    if (v_.empty())
    {
      throw LengthMismatch("a valuation needs at least the entry v(0)");
    }
    if (v_[0] != 0)
    {
      throw NotNormalized("v(0) = " + rat_to_string(v_[0]));
    }
    for (std::size_t i = 1; i < v_.size(); ++i)
    {
      if (v_[i] < v_[i - 1])
      {
        throw NotMonotone("v(" + std::to_string(i) + ") < v(" + std::to_string(i - 1) + ")");
      }
    }
  }

  /// Builds v from its marginal sequence (all entries must be >= 0).
  static Valuation from_marginals(std::vector<Rat> const &marginals)
  {
    std::vector<Rat> vals(marginals.size() + 1, Rat(0));
    for (std::size_t i = 0; i < marginals.size(); ++i)
    {
      vals[i + 1] = vals[i] + marginals[i];
    }
    return Valuation(std::move(vals));
  }

  /// Number of items the valuation is defined over (m >= 0).
  int items() const
  {
    return static_cast<int>(v_.size()) - 1;
  }

  /// v(q); quantities outside 0..m are a caller bug.
  Rat const &operator()(int q) const
  {
    if (q < 0 || q > items())
    {
      throw DomainError("v(" + std::to_string(q) + ") with m = " + std::to_string(items()));
    }
    return v_[static_cast<std::size_t>(q)];
  }

  /// Marginal value of the j-th item, j in 1..m.
  Rat marginal(int j) const
  {
    if (j < 1 || j > items())
    {
      throw DomainError("marginal(" + std::to_string(j) + ") with m = " + std::to_string(items()));
    }
    return v_[static_cast<std::size_t>(j)] - v_[static_cast<std::size_t>(j - 1)];
  }

  std::vector<Rat> const &values() const
  {
    return v_;
  }

  bool operator==(Valuation const &other) const = default;

private:
  std::vector<Rat> v_;
};

/// Running-max closure of a raw sequence with w(0) = 0. Turns an arbitrary
/// (possibly non-monotone) sequence into the valuation a free-disposal agent
/// effectively has.
inline Valuation monotone_closure(std::vector<Rat> const &raw)
{
  if (raw.empty())
  {
    throw LengthMismatch("a valuation needs at least the entry v(0)");
  }
  if (raw[0] != 0)
  {
    throw NotNormalized("v(0) = " + rat_to_string(raw[0]));
  }
  std::vector<Rat> vals(raw.size());
  vals[0] = 0;
  for (std::size_t i = 1; i < raw.size(); ++i)
  {
    vals[i] = rat_max(vals[i - 1], raw[i]);
  }
  return Valuation(std::move(vals));
}

inline bool is_additive(Valuation const &v)
{
  for (int j = 2; j <= v.items(); ++j)
  {
    if (v.marginal(j) != v.marginal(1))
    {
      return false;
    }
  }
  return true;
}

inline bool is_submodular(Valuation const &v)
{
  for (int j = 2; j <= v.items(); ++j)
  {
    if (v.marginal(j) > v.marginal(j - 1))
    {
      return false;
    }
  }
  return true;
}

/// Symmetric XOS characterization: v(i)/i >= v(j)/j for all 1 <= i < j,
/// checked cross-multiplied to stay exact.
inline bool is_xos(Valuation const &v)
{
  for (int i = 1; i < v.items(); ++i)
  {
    for (int j = i + 1; j <= v.items(); ++j)
    {
      if (v(i) * j < v(j) * i)
      {
        return false;
      }
    }
  }
  return true;
}

inline bool is_subadditive(Valuation const &v)
{
  for (int i = 1; i <= v.items(); ++i)
  {
    for (int j = i; i + j <= v.items(); ++j)
    {
      if (v(i) + v(j) < v(i + j))
      {
        return false;
      }
    }
  }
  return true;
}

/// Most restrictive class the valuation belongs to.
inline ValClass classify(Valuation const &v)
{
  if (is_additive(v))
  {
    return ValClass::Additive;
  }
  if (is_submodular(v))
  {
    return ValClass::Submodular;
  }
  if (is_xos(v))
  {
    return ValClass::Xos;
  }
  if (is_subadditive(v))
  {
    return ValClass::Subadditive;
  }
  return ValClass::General;
}

/// Membership in a class (containment-aware: every additive valuation is
/// also submodular, XOS, subadditive and general).
inline bool is_in_class(Valuation const &v, ValClass c)
{
  return static_cast<int>(classify(v)) <= static_cast<int>(c);
}

/// Pointwise-minimal symmetric XOS function u with u >= v:
/// u(i) = max_{j >= i} (i/j) v(j).
inline Valuation minimal_xos_envelope(Valuation const &v)
{
  int const m = v.items();
  std::vector<Rat> u(static_cast<std::size_t>(m) + 1, Rat(0));
  for (int i = 1; i <= m; ++i)
  {
    Rat best = v(i);
    for (int j = i + 1; j <= m; ++j)
    {
      best = rat_max(best, Rat(v(j) * i) / j);
    }
    u[static_cast<std::size_t>(i)] = best;
  }
  return Valuation(std::move(u));
}

/// Pointwise-minimal symmetric submodular function w with w >= v. This is
/// the upper concave envelope of the points (i, v(i)), computed by a hull
/// sweep: keep vertices whose slopes strictly decrease, then interpolate.
inline Valuation minimal_submodular_envelope(Valuation const &v)
{
  int const m = v.items();
  std::vector<int> hull;  // quantities forming the hull, starts at 0
  for (int i = 0; i <= m; ++i)
  {
    // Pop the middle vertex while it lies on or below the chord.
    while (hull.size() >= 2)
    {
      int const a = hull[hull.size() - 2];
      int const b = hull[hull.size() - 1];
      // slope(a,b) <= slope(b,i)  <=>  (v(b)-v(a))(i-b) <= (v(i)-v(b))(b-a)
      if ((v(b) - v(a)) * (i - b) <= (v(i) - v(b)) * (b - a))
      {
        hull.pop_back();
      }
      else
      {
        break;
      }
    }
    hull.push_back(i);
  }

  std::vector<Rat> w(static_cast<std::size_t>(m) + 1, Rat(0));
  for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg)
  {
    int const a = hull[seg];
    int const b = hull[seg + 1];
    for (int i = a; i <= b; ++i)
    {
      w[static_cast<std::size_t>(i)] = v(a) + Rat((v(b) - v(a)) * (i - a)) / (b - a);
    }
  }
  if (m == 0)
  {
    w[0] = 0;
  }
  return Valuation(std::move(w));
}

/// Smallest c >= 1 with u <= c * v and v <= c * u pointwise. For an
/// envelope u >= v this is max_i u(i)/v(i). Indices where both functions
/// are 0 are skipped; one-sided zeros have no finite factor.
inline Rat closeness_factor(Valuation const &v, Valuation const &u)
{
  if (v.items() != u.items())
  {
    throw LengthMismatch("closeness_factor over different m");
  }
  Rat c = 1;
  for (int i = 1; i <= v.items(); ++i)
  {
    if (v(i) == 0 && u(i) == 0)
    {
      continue;
    }
    if (v(i) == 0 || u(i) == 0)
    {
      throw CoverageError("no finite factor at quantity " + std::to_string(i));
    }
    c = rat_max(c, Rat(u(i)) / v(i));
    c = rat_max(c, Rat(v(i)) / u(i));
  }
  return c;
}

}  // namespace mup
