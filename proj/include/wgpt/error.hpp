#pragma once

#include <stdexcept>
#include <string>

namespace wgpt {

enum class Errc {
  NeighborOutsideWindow,
  OutsideDomain,
  FormalDomainViolation,
  InvalidExponent,
  InvalidGraph,
  UnknownVertex,
  DisconnectedWindow,
  NotAPathMetric,
  ZeroRow,
  WindowTooSmall,
  BadRadii,
  SingularSystem,
  VertexOutsideSet,
  NonPositiveTime,
  NotSubharmonic,
  NotIntrinsic,
  RadiiViolateJumpGap,
  SupportEscapesWindow,
  BadExponent,
  IsolatedVertex,
  EmptyMeasure,
  NoExactData,
  ParseError,
  UsageError,
  MaxItersExceeded,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& detail);

}  // namespace wgpt
