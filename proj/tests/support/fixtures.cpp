#include "fixtures.hpp"

#include "hints/corpus.hpp"
#include "hints/mock_provider.hpp"

namespace hints::testing {

std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(HINTS_TEST_DATA_DIR) / name; }

PipelineConfig quick_config() {
    PipelineConfig c;
    c.backoff = std::chrono::milliseconds(0);
    c.concurrency = 1;
    return c;
}

std::shared_ptr<const Artifact> prepared_corpus() {
    static const std::shared_ptr<const Artifact> artifact = [] {
        MockProvider provider;
        Pipeline pipeline(provider, quick_config());
        return std::make_shared<const Artifact>(prepare_artifact(read_corpus_jsonl(data_file("corpus50.jsonl")), pipeline));
    }();
    return artifact;
}

}  // namespace hints::testing
