#include "wgpt/error.hpp"

namespace wgpt {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NeighborOutsideWindow: return "NeighborOutsideWindow";
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::FormalDomainViolation: return "FormalDomainViolation";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::InvalidGraph: return "InvalidGraph";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::DisconnectedWindow: return "DisconnectedWindow";
    case Errc::NotAPathMetric: return "NotAPathMetric";
    case Errc::ZeroRow: return "ZeroRow";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::BadRadii: return "BadRadii";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::VertexOutsideSet: return "VertexOutsideSet";
    case Errc::NonPositiveTime: return "NonPositiveTime";
    case Errc::NotSubharmonic: return "NotSubharmonic";
    case Errc::NotIntrinsic: return "NotIntrinsic";
    case Errc::RadiiViolateJumpGap: return "RadiiViolateJumpGap";
    case Errc::SupportEscapesWindow: return "SupportEscapesWindow";
    case Errc::BadExponent: return "BadExponent";
    case Errc::IsolatedVertex: return "IsolatedVertex";
    case Errc::EmptyMeasure: return "EmptyMeasure";
    case Errc::NoExactData: return "NoExactData";
    case Errc::ParseError: return "ParseError";
    case Errc::UsageError: return "UsageError";
    case Errc::MaxItersExceeded: return "MaxItersExceeded";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace wgpt
