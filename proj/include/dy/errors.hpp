#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dy {

// Index or level out of range for a generator, or an undefined quantity
// (e.g. the degree of zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated a precondition: mismatched contexts, ordered pair passed to
// rule_for, delta-sl suite requested with m != n, and so on.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A rewrite rule was requested for a generator whose level exceeds the
// configured cap.
class CapError : public std::runtime_error {
 public:
  CapError(int needed, int cap)
      : std::runtime_error("level cap exceeded: needed cap " + std::to_string(needed) +
                           ", configured cap " + std::to_string(cap)),
        needed_(needed) {}
  int needed() const { return needed_; }

 private:
  int needed_;
};

// Neumann inversion of something that is not 1 + O(h).
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dy
