#ifndef MF_ERROR_HPP
#define MF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mf {

// Malformed type-strings, JSON files and command lines.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Members disagree on a shared marginal beyond tolerance.
class IncompatibleChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CellCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven-impossible state was reached; indicates a bug, not bad input.
class InternalDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mf

#endif  // MF_ERROR_HPP
