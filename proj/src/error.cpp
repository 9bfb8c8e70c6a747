#include "specweyl/error.hpp"

namespace specweyl {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_domain: return "invalid-domain";
    case errc::invalid_body: return "invalid-body";
    case errc::invalid_argument: return "invalid-argument";
    case errc::unsupported_domain: return "unsupported-domain";
    case errc::invalid_pointset: return "invalid-pointset";
    case errc::invalid_offsets: return "invalid-offsets";
    case errc::undefined_separation: return "undefined-separation";
    case errc::certificate_unavailable: return "certificate-unavailable";
    case errc::fit_unavailable: return "fit-unavailable";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace specweyl
