#pragma once

// End-to-end orchestration: decompose, evaluate, verify each claim on a
// bounded worker pool, then sort by claim id.

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "factlens/cache.hpp"
#include "factlens/config.hpp"
#include "factlens/dataset.hpp"
#include "factlens/decomposer.hpp"
#include "factlens/eval_ensemble.hpp"
#include "factlens/http_provider.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/results.hpp"
#include "factlens/similarity.hpp"
#include "factlens/verifier.hpp"

namespace factlens {

// Counts requests issued by one pipeline role before they reach caches.
class CountingProvider final : public ChatProvider {
public:
    explicit CountingProvider(std::shared_ptr<ChatProvider> inner) : inner_(std::move(inner)) {}

    std::string id() const override { return inner_->id(); }

    std::string complete(const ChatRequest& request) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_->complete(request);
    }

    std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::atomic<std::size_t> calls_{0};
};

struct Providers {
    std::shared_ptr<ChatProvider> chat;
    std::shared_ptr<const SimilarityBackend> similarity;
    std::shared_ptr<MockProvider> mock;  // set when running on fixtures
};

inline Providers make_providers(const RunConfig& config, WarningSink warn = default_warning_sink()) {
    Providers p;
    if (config.mock_fixtures) {
        p.mock = load_mock_fixture(*config.mock_fixtures);
        p.chat = p.mock;
    } else {
        ProviderConfig pc = config.provider;
        apply_provider_env(pc);
        if (pc.api_base.empty()) {
            throw ConfigError("no provider configured: set FACTLENS_API_BASE, provider.api_base or --mock-fixtures");
        }
        p.chat = std::make_shared<HttpChatProvider>(pc);
    }
    if (config.cache_dir) {
        auto cache = std::make_shared<const ResponseCache>(*config.cache_dir, warn);
        p.chat = std::make_shared<CachingProvider>(p.chat, cache);
    }
    if (config.similarity == SimilarityKind::Embedding) {
        if (config.mock_fixtures) throw ConfigError("embedding similarity needs a live provider");
        ProviderConfig pc = config.provider;
        apply_provider_env(pc);
        p.similarity = std::make_shared<EmbeddingSimilarity>(
            "embedding:" + config.similarity_model,
            make_http_embedder(pc, config.similarity_model, config.similarity_route));
    } else {
        p.similarity = std::make_shared<TokenF1Similarity>();
    }
    return p;
}

struct StageSet {
    bool evaluate = true;
    bool verify = true;
};

class Pipeline {
public:
    Pipeline(RunConfig config, Providers providers) : config_(std::move(config)), providers_(std::move(providers)) {
        if (!providers_.chat) throw ConfigError("pipeline needs a chat provider");
        config_.statistical.validate();
        if (config_.parallelism < 1) throw ConfigError("parallelism must be >= 1");
        PromptSet prompts = config_.prompts_dir ? load_prompt_set(*config_.prompts_dir) : PromptSet{};
        DemonstrationSet demos =
            config_.demonstrations ? load_demonstrations(*config_.demonstrations) : default_demonstrations();
        for (const char* role : {"decomposer", "extractor", "judge", "verifier"}) {
            roles_[role] = std::make_shared<CountingProvider>(providers_.chat);
        }
        decomposer_ = std::make_unique<Decomposer>(roles_["decomposer"], config_.decomposer_model, std::move(demos),
                                                   prompts.decomposition);
        verifier_ = std::make_unique<Verifier>(roles_["verifier"], config_.verifier_model, prompts.verification);
        EvaluatorSet set;
        set.extractor = std::make_shared<EntityExtractor>(roles_["extractor"], config_.extractor_model,
                                                          prompts.extraction);
        set.similarity = providers_.similarity;
        set.judge = std::make_shared<LlmJudge>(roles_["judge"], config_.judge_model, prompts);
        set.statistical = config_.statistical;
        evaluator_ = std::make_unique<Evaluator>(std::move(set));
    }

    const RunConfig& config() const noexcept { return config_; }

    RunResults run(const std::vector<DatasetEntry>& entries, StageSet stages = {}) const {
        std::vector<Slot> slots(entries.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= entries.size()) return;
                slots[i] = process(entries[i], stages);
            }
        };
        const std::size_t n_threads = std::min(config_.parallelism, std::max<std::size_t>(entries.size(), 1));
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(n_threads);
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        }

        RunResults out;
        for (auto& s : slots) {
            if (auto* r = std::get_if<InstanceResult>(&s)) out.instances.push_back(std::move(*r));
            else if (auto* f = std::get_if<InstanceFailure>(&s)) out.failures.push_back(std::move(*f));
        }
        std::sort(out.instances.begin(), out.instances.end(),
                  [](const auto& a, const auto& b) { return a.record.id < b.record.id; });
        std::sort(out.failures.begin(), out.failures.end(),
                  [](const auto& a, const auto& b) { return a.claim_id < b.claim_id; });
        for (const auto& [role, p] : roles_) out.provider_calls[role] = p->calls();
        return out;
    }

private:
    using Slot = std::variant<std::monostate, InstanceResult, InstanceFailure>;

    Slot process(const DatasetEntry& entry, StageSet stages) const {
        InstanceResult r;
        r.record = entry.record;
        r.human_scores = entry.human_scores;
        std::string stage = "decompose";
        try {
            if (config_.use_gold_subclaims && entry.decomposition) {
                r.decomposition = *entry.decomposition;
            } else {
                r.decomposition = decomposer_->decompose(entry.record, config_.seed);
            }
            if (stages.evaluate) {
                stage = "evaluate";
                r.evaluation = evaluator_->evaluate(entry.record, r.decomposition, config_.mode);
            }
            if (stages.verify) {
                stage = "verify";
                r.verification = verifier_->verify_fine_grained(entry.record, r.decomposition);
                if (config_.holistic) r.verification->holistic_label = verifier_->verify_holistic(entry.record);
            }
        } catch (const std::exception& e) {
            return InstanceFailure{entry.record.id, stage, e.what()};
        }
        return r;
    }

    RunConfig config_;
    Providers providers_;
    std::map<std::string, std::shared_ptr<CountingProvider>> roles_;
    std::unique_ptr<Decomposer> decomposer_;
    std::unique_ptr<Verifier> verifier_;
    std::unique_ptr<Evaluator> evaluator_;
};

// 0 = every instance succeeded, 2 = some failed.
inline int run_exit_code(const RunResults& r) noexcept { return r.failures.empty() ? 0 : 2; }

} // namespace factlens
