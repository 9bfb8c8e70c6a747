#pragma once

#include <stdexcept>
#include <string>

namespace specweyl {

// Stable error codes surfaced by the CLI as machine-readable JSON.
enum class errc {
  invalid_domain,
  invalid_body,
  invalid_argument,
  unsupported_domain,
  invalid_pointset,
  invalid_offsets,
  undefined_separation,
  certificate_unavailable,
  fit_unavailable,
  io_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw error(code, msg);
}

inline void require(bool ok, errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace specweyl
