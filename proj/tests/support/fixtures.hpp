#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "hints/artifact.hpp"
#include "hints/pipeline.hpp"

namespace hints::testing {

std::filesystem::path data_file(const std::string& name);

/// Offline pipeline settings: no backoff, no rate limit.
PipelineConfig quick_config();

/// The bundled 50-document corpus prepared with the mock provider. Built once.
std::shared_ptr<const Artifact> prepared_corpus();

}  // namespace hints::testing
