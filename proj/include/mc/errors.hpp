#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mc {

// Common base so the CLI can map any library failure to a stable error kind.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define MC_DEFINE_ERROR(NAME)                                        \
  struct NAME : Error {                                              \
    explicit NAME(const std::string& msg) : Error(#NAME, msg) {}     \
  }

MC_DEFINE_ERROR(BadChair);
MC_DEFINE_ERROR(EmptyRestriction);
MC_DEFINE_ERROR(TooLong);
MC_DEFINE_ERROR(OutOfRange);
MC_DEFINE_ERROR(DepthCap);
MC_DEFINE_ERROR(UndefinedName);
MC_DEFINE_ERROR(IdenticalWords);
MC_DEFINE_ERROR(CapExceeded);
MC_DEFINE_ERROR(IllegalMove);
MC_DEFINE_ERROR(EndOfWord);
MC_DEFINE_ERROR(NotPrime);
MC_DEFINE_ERROR(NotPermutation);
MC_DEFINE_ERROR(DomainError);
MC_DEFINE_ERROR(UnsupportedExpr);

#undef MC_DEFINE_ERROR

// Parse failures carry a 1-based source position.
struct SyntaxError : Error {
  SyntaxError(const std::string& msg, int line, int col)
      : Error("SyntaxError", msg + " at line " + std::to_string(line) +
                             ", column " + std::to_string(col)),
        line(line), col(col) {}
  int line;
  int col;
};

}  // namespace mc
