#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sigmacat {

  // Raised when input data violates the axioms of the structure being built.
  class ValidationError : public std::runtime_error {
   public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)),
          _violations(std::move(violations)) {}

    explicit ValidationError(std::string const& violation)
        : ValidationError(std::vector<std::string>{violation}) {}

    std::vector<std::string> const& violations() const noexcept {
      return _violations;
    }

   private:
    static std::string join(std::vector<std::string> const& v) {
      std::string out;
      for (auto const& s : v) {
        if (!out.empty()) {
          out += "; ";
        }
        out += s;
      }
      return out;
    }

    std::vector<std::string> _violations;
  };

  // An exponential construction would exceed its configured bound.
  class SizeLimitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // An operation was called outside its precondition.
  class PreconditionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A search that is guaranteed to succeed on valid input came up empty.
  class SearchExhausted : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

}  // namespace sigmacat
