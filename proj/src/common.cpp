#include "rbma/common.hpp"

namespace rbma {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::NodeOutOfRange: return "NodeOutOfRange";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::AllZeroMatrix: return "AllZeroMatrix";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::ItemOutOfRange: return "ItemOutOfRange";
    case Errc::InvalidCost: return "InvalidCost";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rbma
