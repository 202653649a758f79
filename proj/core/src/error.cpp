#include "hints/error.hpp"

namespace hints {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::input: return "input";
        case ErrorKind::structural: return "structural";
        case ErrorKind::not_found: return "not_found";
        case ErrorKind::capacity: return "capacity";
        case ErrorKind::domain: return "domain";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::geometry: return "geometry";
        case ErrorKind::provider: return "provider";
        case ErrorKind::pipeline: return "pipeline";
        case ErrorKind::config: return "config";
        case ErrorKind::over_budget: return "over_budget";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::json detail)
    : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

}  // namespace hints
