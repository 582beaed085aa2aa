#pragma once
// Exception taxonomy, chosen so the C wrapper can map failures to stable
// error codes without string matching:
//   std::invalid_argument  -> TL_EINVAL   (malformed input, bad sizes, bad flags)
//   std::domain_error      -> TL_EDOMAIN  (math precondition failed on valid input)
//   NoConvergence          -> TL_ENOCONV  (iteration budget exhausted)
//   IoError                -> TL_EIO      (file system)
//   anything else          -> TL_EINTERNAL

#include <stdexcept>
#include <string>

namespace tunnel {

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  int line;  // 1-based line in the config text, 0 when not line-specific
  ConfigError(int line_, const std::string& what)
      : std::runtime_error(line_ > 0 ? "config line " + std::to_string(line_) + ": " + what
                                     : "config: " + what),
        line(line_) {}
};

}  // namespace tunnel
