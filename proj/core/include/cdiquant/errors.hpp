#pragma once

#include <stdexcept>
#include <string>

namespace cdiquant {

// Input is structurally valid but numerically unusable (e.g. a correlation
// matrix that is indefinite beyond tolerance).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantity that must be nonzero collapsed: zero channel vector, codeword
// rotated into a null space, all-zero coupling mask.
struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The quantized-CDI matrix handed to the ZF precoder is rank deficient.
struct singular_precoder_error : numerical_error {
  using numerical_error::numerical_error;
};

// Config file problem; carries a line/key diagnostic when available.
struct config_error : std::runtime_error {
  config_error(const std::string& message, int line = 0, std::string key = {})
      : std::runtime_error(format(message, line, key)), line(line), key(std::move(key)) {}

  int line;
  std::string key;

 private:
  static std::string format(const std::string& message, int line, const std::string& key) {
    std::string out = "config error";
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    if (!key.empty()) out += " [" + key + "]";
    out += ": " + message;
    return out;
  }
};

}  // namespace cdiquant
