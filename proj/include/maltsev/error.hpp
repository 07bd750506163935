#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maltsev {

  // Base class for every error the library reports.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed term, identity or algebra text. `position` is a byte offset
  // into the parsed text (or a line number for line-oriented formats).
  class ParseError : public Error {
   public:
    ParseError(std::string const& what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"),
          _message(what),
          _position(position) {}

    // The message without the position suffix.
    [[nodiscard]] std::string const& message() const noexcept {
      return _message;
    }

    [[nodiscard]] std::size_t position() const noexcept {
      return _position;
    }

   private:
    std::string _message;
    std::size_t _position;
  };

  // Bad arguments: wrong arity, unbound variable, non-idempotent input, ...
  class InputError : public Error {
   public:
    using Error::Error;
  };

  // A configured size bound was hit. Callers that report verdicts catch this
  // and turn it into an "undecided at budget" outcome.
  class BudgetExceeded : public Error {
   public:
    BudgetExceeded(std::string const& what, std::size_t limit)
        : Error(what + " exceeded budget " + std::to_string(limit)),
          _limit(limit) {}

    [[nodiscard]] std::size_t limit() const noexcept {
      return _limit;
    }

   private:
    std::size_t _limit;
  };

}  // namespace maltsev
