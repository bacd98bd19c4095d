#pragma once

#include <stdexcept>
#include <string>

namespace fauxpas {

/// Malformed model input: bad scenario fields, out-of-range constants,
/// inconsistent declarations. Thrown during validation and model assembly.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A document key that the schema does not recognize. Subtype of SpecError
/// so generic handlers keep working; carries the offending key path.
class UnknownKeyError : public SpecError {
 public:
  explicit UnknownKeyError(const std::string& path)
      : SpecError("unknown key: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Conditioning wiped out every hypothesis: the observed evidence has zero
/// probability under the prior. Always a hard error, never silently renormalized.
class ZeroPosteriorError : public std::runtime_error {
 public:
  explicit ZeroPosteriorError(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive enumeration would exceed the configured history cap.
class ExplosionGuardError : public std::runtime_error {
 public:
  ExplosionGuardError(std::size_t cap, const std::string& what)
      : std::runtime_error(what), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// No transition rule's guard accepted a (state, joint action) pair.
class NoMatchingRuleError : public std::runtime_error {
 public:
  explicit NoMatchingRuleError(const std::string& what) : std::runtime_error(what) {}
};

/// An utterance was used in a context that requires its denotation,
/// but no predicate is registered for it.
class UndefinedSemanticsError : public std::runtime_error {
 public:
  explicit UndefinedSemanticsError(const std::string& utterance)
      : std::runtime_error("no denotation registered for utterance: " + utterance) {}
};

}  // namespace fauxpas
