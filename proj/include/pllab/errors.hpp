#pragma once

#include <stdexcept>
#include <string>

namespace pllab {

/// Rejected input: dimension mismatch, bad parameter, malformed document.
/// `pointer` is a JSON pointer into the offending document when known.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what, std::string pointer = {})
      : std::invalid_argument(what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// A bracket whose certified lower bound exceeds its upper bound, or a
/// representation that fails to reconstruct its target. Always a bug.
class SoundnessViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pllab
