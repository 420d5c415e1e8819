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

#include "mup/valuation.hpp"
#include "mup/errors.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <vector>

using namespace mup;

namespace {

Valuation val(std::vector<int> const &xs)
{
  std::vector<Rat> rs(xs.begin(), xs.end());
  return Valuation(rs);
}

/// All monotone vectors (v(0) = 0, entries in 0..cap) of length m+1.
std::vector<std::vector<int>> monotone_vectors(int m, int cap)
{
  std::vector<std::vector<int>> out;
  std::vector<int>              cur(static_cast<std::size_t>(m) + 1, 0);
  std::function<void(int)>      rec = [&](int i) {
    if (i > m)
    {
      out.push_back(cur);
      return;
    }
    for (int x = cur[static_cast<std::size_t>(i) - 1]; x <= cap; ++x)
    {
      cur[static_cast<std::size_t>(i)] = x;
      rec(i + 1);
    }
  };
  rec(1);
  return out;
}

/// Independent submodular-envelope oracle: the chord formula. For each i the
/// envelope is the highest chord between data points spanning i.
Valuation chord_envelope(Valuation const &v)
{
  int const        m = v.items();
  std::vector<Rat> u(static_cast<std::size_t>(m) + 1, Rat(0));
  for (int i = 1; i <= m; ++i)
  {
    Rat best = v(i);
    for (int k = 0; k <= i; ++k)
    {
      for (int j = std::max(i, k + 1); j <= m; ++j)
      {
        Rat const cand = v(k) + Rat(i - k) * (v(j) - v(k)) / Rat(j - k);
        if (cand > best)
        {
          best = cand;
        }
      }
    }
    u[static_cast<std::size_t>(i)] = best;
  }
  return Valuation(u);
}

bool dominates(Valuation const &a, Valuation const &b)
{
  for (int i = 0; i <= a.items(); ++i)
  {
    if (a(i) < b(i))
    {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("constructor validates shape", "[valuation]")
{
  CHECK_THROWS_AS(Valuation({}), LengthMismatch);
  CHECK_THROWS_AS(Valuation({Rat(1), Rat(2)}), NotNormalized);
  CHECK_THROWS_AS(Valuation({Rat(0), Rat(2), Rat(1)}), NotMonotone);
  CHECK_NOTHROW(Valuation({Rat(0)}));
  CHECK_NOTHROW(val({0, 1, 1, 5}));
}

TEST_CASE("accessors and marginals", "[valuation]")
{
  Valuation const v = val({0, 5, 9, 11});
  CHECK(v.items() == 3);
  CHECK(v(0) == 0);
  CHECK(v(2) == 9);
  CHECK(v.marginal(1) == 5);
  CHECK(v.marginal(2) == 4);
  CHECK(v.marginal(3) == 2);
  CHECK_THROWS_AS(v(-1), DomainError);
  CHECK_THROWS_AS(v(4), DomainError);
  CHECK_THROWS_AS(v.marginal(0), DomainError);
  CHECK_THROWS_AS(v.marginal(4), DomainError);
  CHECK(Valuation::from_marginals({Rat(5), Rat(4), Rat(2)}) == v);
}

TEST_CASE("monotone_closure takes running maxima", "[valuation]")
{
  CHECK(monotone_closure({Rat(0), Rat(3), Rat(1), Rat(4)}) == val({0, 3, 3, 4}));
  CHECK_THROWS_AS(monotone_closure({Rat(1), Rat(2)}), NotNormalized);
}

TEST_CASE("class predicates on handcrafted members", "[valuation]")
{
  Valuation const additive = val({0, 2, 4, 6});
  Valuation const submod   = val({0, 5, 9, 11});
  Valuation const xos      = Valuation({Rat(0), Rat(2), Rat(3), Rat(9, 2)});
  Valuation const subadd   = val({0, 1, 1, 2});
  Valuation const general  = val({0, 1, 1, 3});

  CHECK(classify(additive) == ValClass::Additive);
  CHECK(classify(submod) == ValClass::Submodular);
  CHECK(classify(xos) == ValClass::Xos);
  CHECK(classify(subadd) == ValClass::Subadditive);
  CHECK(classify(general) == ValClass::General);

  CHECK(is_submodular(additive));
  CHECK(is_xos(submod));
  CHECK(is_subadditive(xos));
  CHECK_FALSE(is_additive(submod));
  CHECK_FALSE(is_submodular(xos));
  CHECK_FALSE(is_xos(subadd));
  CHECK_FALSE(is_subadditive(general));
}

TEST_CASE("class chain: every class contains the one below", "[valuation]")
{
  for (auto const &raw : monotone_vectors(4, 4))
  {
    std::vector<Rat> rs(raw.begin(), raw.end());
    Valuation const  v(rs);
    if (is_additive(v))
    {
      CHECK(is_submodular(v));
    }
    if (is_submodular(v))
    {
      CHECK(is_xos(v));
    }
    if (is_xos(v))
    {
      CHECK(is_subadditive(v));
    }
    ValClass const c = classify(v);
    for (int k = 0; k <= static_cast<int>(ValClass::General); ++k)
    {
      CHECK(is_in_class(v, static_cast<ValClass>(k)) == (static_cast<int>(c) <= k));
    }
  }
}

TEST_CASE("envelopes: worked values", "[valuation]")
{
  // Step function: 1 for 1..3 items, then 2.
  Valuation const step = val({0, 1, 1, 1, 2});
  CHECK(minimal_xos_envelope(step) ==
        Valuation({Rat(0), Rat(1), Rat(1), Rat(3, 2), Rat(2)}));

  // Concave hull interpolates across the dip at 2 items.
  Valuation const dip = val({0, 5, 9, 14});
  CHECK(minimal_submodular_envelope(dip) ==
        Valuation({Rat(0), Rat(5), Rat(19, 2), Rat(14)}));
}

TEST_CASE("hull envelope matches the chord oracle exhaustively", "[valuation]")
{
  for (auto const &raw : monotone_vectors(4, 4))
  {
    std::vector<Rat> rs(raw.begin(), raw.end());
    Valuation const  v(rs);
    CHECK(minimal_submodular_envelope(v) == chord_envelope(v));
  }
}

TEST_CASE("envelopes are idempotent class members dominating the input", "[valuation]")
{
  for (auto const &raw : monotone_vectors(5, 4))
  {
    std::vector<Rat> rs(raw.begin(), raw.end());
    Valuation const  v(rs);

    Valuation const x = minimal_xos_envelope(v);
    CHECK(is_xos(x));
    CHECK(dominates(x, v));
    CHECK(minimal_xos_envelope(x) == x);
    if (is_xos(v))
    {
      CHECK(x == v);
    }

    Valuation const s = minimal_submodular_envelope(v);
    CHECK(is_submodular(s));
    CHECK(dominates(s, v));
    CHECK(minimal_submodular_envelope(s) == s);
    if (is_submodular(v))
    {
      CHECK(s == v);
    }

    // Submodular is the smaller class, so its envelope dominates the other.
    CHECK(dominates(s, x));
  }
}

TEST_CASE("envelopes are minimal: exhaustive dominating members", "[valuation]")
{
  for (auto const &raw : monotone_vectors(3, 3))
  {
    std::vector<Rat> rs(raw.begin(), raw.end());
    Valuation const  v(rs);
    Valuation const  x = minimal_xos_envelope(v);
    Valuation const  s = minimal_submodular_envelope(v);

    // Every class member w >= v (on the same grid) must dominate the envelope.
    std::vector<int>         w(raw);
    std::function<bool(int)> rec = [&](int i) -> bool {
      if (i > 3)
      {
        std::vector<Rat> ws(w.begin(), w.end());
        Valuation const  cand = monotone_closure(ws);
        if (is_xos(cand) && dominates(cand, v) && !dominates(cand, x))
        {
          return false;
        }
        if (is_submodular(cand) && dominates(cand, v) && !dominates(cand, s))
        {
          return false;
        }
        return true;
      }
      for (w[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(i)];
           w[static_cast<std::size_t>(i)] <= 6; ++w[static_cast<std::size_t>(i)])
      {
        if (!rec(i + 1))
        {
          return false;
        }
      }
      return true;
    };
    CHECK(rec(1));
  }
}

TEST_CASE("closeness factor: worked values and symmetry", "[valuation]")
{
  Valuation const step = val({0, 1, 1, 1, 2});
  Valuation const env  = minimal_xos_envelope(step);
  CHECK(closeness_factor(env, step) == Rat(3, 2));
  CHECK(closeness_factor(step, env) == Rat(3, 2));
  CHECK(closeness_factor(step, step) == Rat(1));
  CHECK(closeness_factor(val({0, 0, 1}), val({0, 0, 1})) == Rat(1));
  CHECK_THROWS_AS(closeness_factor(val({0, 1}), val({0, 0})), CoverageError);
  CHECK_THROWS_AS(closeness_factor(val({0, 1}), val({0, 1, 2})), LengthMismatch);
}

TEST_CASE("subadditive valuations stay within factor 2 of their envelopes", "[valuation]")
{
  for (auto const &raw : monotone_vectors(5, 5))
  {
    std::vector<Rat> rs(raw.begin(), raw.end());
    Valuation const  v(rs);
    if (!is_subadditive(v) || v(v.items()) == 0)
    {
      continue;
    }
    if (v(1) == 0)
    {
      continue;  // closeness needs matching supports
    }
    CHECK(closeness_factor(minimal_xos_envelope(v), v) <= 2);
    CHECK(closeness_factor(minimal_submodular_envelope(v), v) <= 2);
  }
}

TEST_CASE("closeness bound is tight: step and two-slope families", "[valuation]")
{
  // Subadditive step: 1 on 1..l, 2 at l+1. XOS envelope is 2l/(l+1) away.
  for (int l : {3, 10, 20})
  {
    std::vector<Rat> vs(static_cast<std::size_t>(l) + 2, Rat(1));
    vs[0]                                  = 0;
    vs[static_cast<std::size_t>(l) + 1]    = 2;
    Valuation const v(vs);
    REQUIRE(is_subadditive(v));
    CHECK(closeness_factor(minimal_xos_envelope(v), v) == Rat(2 * l, l + 1));
  }

  // XOS two-slope: 1 on 1..l, i/l up to l*l. Submodular envelope is
  // 2l/(l+1) away as well.
  for (int l : {3, 6})
  {
    int const        m = l * l;
    std::vector<Rat> vs(static_cast<std::size_t>(m) + 1, Rat(0));
    for (int i = 1; i <= m; ++i)
    {
      vs[static_cast<std::size_t>(i)] = (i <= l) ? Rat(1) : Rat(i, l);
    }
    Valuation const v(vs);
    REQUIRE(is_xos(v));
    REQUIRE_FALSE(is_submodular(v));
    CHECK(closeness_factor(minimal_submodular_envelope(v), v) == Rat(2 * l, l + 1));
  }
}
