#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tfs {

enum class Errc {
  invalid_parameter,
  independence,   // two noise channels share a seed
  undefined_snr,  // SNR requested for a zero-power signal
  aliasing,       // analysis frequency at or above Nyquist
  out_of_range,   // shifted region leaves the spectrum
  degenerate,     // zero-energy / constant input
  io,
  schema,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for the library; the code says which contract broke.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tfs
