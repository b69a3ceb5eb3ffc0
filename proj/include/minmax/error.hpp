#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmh {

/// Base for every error raised by the toolkit. `kind()` is the stable
/// machine-readable name that ends up in JSON reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("ParseError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

#define MMH_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

MMH_DEFINE_ERROR(DomainError)
MMH_DEFINE_ERROR(InfiniteMoment)
MMH_DEFINE_ERROR(NonConvergent)
MMH_DEFINE_ERROR(NotSubregular)
MMH_DEFINE_ERROR(HypothesisFailed)
MMH_DEFINE_ERROR(NoFiniteD)
MMH_DEFINE_ERROR(GridTooCoarse)
MMH_DEFINE_ERROR(RescaleFailed)
MMH_DEFINE_ERROR(NotPositiveSemidefinite)

#undef MMH_DEFINE_ERROR

}  // namespace mmh
