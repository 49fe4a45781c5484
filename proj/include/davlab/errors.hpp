#pragma once

#include <stdexcept>

namespace davlab {

// Base type for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A presentation parameter is outside its legal range (m < 1, n < 1, or
// s outside [1, max(n-1, 1)]).
struct ParamOutOfRange : Error {
  using Error::Error;
};

// (m, n, s) does not present a group of order m*n, i.e. ord_n(s) != m.
struct InvalidPresentation : Error {
  using Error::Error;
};

// A subsequence-product table would need more cells than the configured cap.
struct StateSpaceCapExceeded : Error {
  using Error::Error;
};

// A length argument is outside [1, |S|] or an analogous range.
struct LengthOutOfRange : Error {
  using Error::Error;
};

// The image of a sequence in the quotient group is not product-one, so the
// requested factorization does not exist.
struct QuotientNotProductOne : Error {
  using Error::Error;
};

// The group order exceeds the cap for an exhaustive operation.
struct OrderCapExceeded : Error {
  using Error::Error;
};

// An operation that needs a nonempty set was given an empty one.
struct EmptySetError : Error {
  using Error::Error;
};

// A set-addition theorem that requires an abelian ambient group was invoked
// on a non-abelian one.
struct NonAbelianAmbient : Error {
  using Error::Error;
};

// Strict-mode lemma check invoked on an instance violating the hypotheses.
struct HypothesisViolated : Error {
  using Error::Error;
};

// Malformed sequence text, sequence JSON, or cache file.
struct FormatError : Error {
  using Error::Error;
};

// Unreadable or structurally damaged checkpoint file.
struct CorruptCheckpoint : Error {
  using Error::Error;
};

// A checkpoint or cache was produced by an incompatible run (different
// format version, group parameters, search settings, or engine version).
struct VersionMismatch : Error {
  using Error::Error;
};

// Sequence length does not match the length required by a classification.
struct WrongLength : Error {
  using Error::Error;
};

// A theorem oracle was invoked on a group outside its scope.
struct NotStarGroup : Error {
  using Error::Error;
};

}  // namespace davlab
