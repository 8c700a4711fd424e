#include "tfs/error.hpp"

namespace tfs {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::independence: return "noise independence";
    case Errc::undefined_snr: return "undefined SNR";
    case Errc::aliasing: return "aliasing";
    case Errc::out_of_range: return "out of range";
    case Errc::degenerate: return "degenerate input";
    case Errc::io: return "i/o";
    case Errc::schema: return "schema mismatch";
  }
  return "unknown";
}

}  // namespace tfs
