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

#include <stdexcept>
#include <string>

namespace mup {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error
{
  explicit Error(std::string const &msg)
    : std::runtime_error(msg)
  {}
};

#define MUP_DEFINE_ERROR(NAME)            \
  struct NAME : Error                     \
  {                                       \
    explicit NAME(std::string const &msg) \
      : Error(std::string(#NAME ": ") + msg) \
    {}                                    \
  }

MUP_DEFINE_ERROR(ParseError);          // malformed rational / JSON input
MUP_DEFINE_ERROR(NotNormalized);       // valuation with v(0) != 0
MUP_DEFINE_ERROR(NotMonotone);         // valuation with a decreasing step
MUP_DEFINE_ERROR(DomainError);         // quantity outside 0..m
MUP_DEFINE_ERROR(LengthMismatch);      // valuation length inconsistent with m
MUP_DEFINE_ERROR(NotSubmodular);       // scheme precondition violated
MUP_DEFINE_ERROR(NotSubadditive);      // scheme precondition violated
MUP_DEFINE_ERROR(NotTwoIdentical);     // scheme needs exactly two equal agents
MUP_DEFINE_ERROR(CoverageError);       // closeness undefined (0 vs nonzero)
MUP_DEFINE_ERROR(InsufficientDemand);  // fewer than m strictly positive marginals
MUP_DEFINE_ERROR(InvalidOrder);        // order is not a permutation of the agents
MUP_DEFINE_ERROR(InvalidTieChoice);    // supplied quantity not utility-maximizing
MUP_DEFINE_ERROR(NegativePrice);       // price vectors must be non-negative
MUP_DEFINE_ERROR(PriceCountMismatch);  // price vector length != available items
MUP_DEFINE_ERROR(SizeLimit);           // adversarial search above configured cap
MUP_DEFINE_ERROR(PolicyDomainError);   // dynamic policy undefined at reached state
MUP_DEFINE_ERROR(ClassMismatch);       // valuation outside the declared class
MUP_DEFINE_ERROR(BadSupport);          // distribution support invalid
MUP_DEFINE_ERROR(UnknownId);           // no catalog instance under this name
MUP_DEFINE_ERROR(BadParams);           // instance parameters out of range
MUP_DEFINE_ERROR(BoundViolated);       // catalog bound check failed at some grid point

#undef MUP_DEFINE_ERROR

}  // namespace mup
