#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hints {

enum class ErrorKind {
    input,       // caller supplied something malformed or out of range
    structural,  // corpus references do not line up
    not_found,
    capacity,    // curve too short for the nodes it must hold
    domain,      // math precondition (zero vector, empty set)
    numeric,     // non-finite intermediate
    geometry,
    provider,    // LLM backend failed; usually retriable
    pipeline,
    config,
    over_budget,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base for every error the engine raises. `detail` carries structured context
/// (field paths, offending ids) that the service forwards verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, nlohmann::json detail = nullptr);

    ErrorKind kind() const noexcept { return kind_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    nlohmann::json detail_;
};

#define HINTS_DEFINE_ERROR(Name, Kind)                                           \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& message, nlohmann::json detail = nullptr) \
            : Error(ErrorKind::Kind, message, std::move(detail)) {}              \
    }

HINTS_DEFINE_ERROR(InputError, input);
HINTS_DEFINE_ERROR(StructuralError, structural);
HINTS_DEFINE_ERROR(NotFoundError, not_found);
HINTS_DEFINE_ERROR(CapacityError, capacity);
HINTS_DEFINE_ERROR(DomainError, domain);
HINTS_DEFINE_ERROR(NumericError, numeric);
HINTS_DEFINE_ERROR(GeometryError, geometry);
HINTS_DEFINE_ERROR(ProviderError, provider);
HINTS_DEFINE_ERROR(PipelineError, pipeline);
HINTS_DEFINE_ERROR(ConfigError, config);
HINTS_DEFINE_ERROR(OverBudgetError, over_budget);

#undef HINTS_DEFINE_ERROR

}  // namespace hints
