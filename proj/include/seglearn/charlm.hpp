#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "seglearn/corpus.hpp"

namespace seglearn {

// Conditional character model p(c | preceding text, prompt). Implementations
// must return strictly positive probabilities that sum to 1 (within 1e-6)
// over the vocabulary for any fixed context.
class CharLanguageModel {
public:
    virtual ~CharLanguageModel() = default;
    virtual double prob(char32_t c, std::u32string_view preceding,
                        std::u32string_view prompt) const = 0;
    virtual std::size_t vocab_size() const = 0;
};

// Backoff-free n-gram character model with add-k smoothing. The prompt is
// accepted to keep the scoring signature stable for conditional backends,
// but this model has no conditioning mechanism and ignores it.
class NgramCharLm final : public CharLanguageModel {
public:
    explicit NgramCharLm(int order = 3, double add_k = 0.01);

    void train(const std::vector<Sentence>& sentences);

    double prob(char32_t c, std::u32string_view preceding,
                std::u32string_view prompt) const override;
    std::size_t vocab_size() const override;  // observed characters + unknown

    int order() const { return order_; }

private:
    struct ContextStat {
        std::unordered_map<char32_t, std::uint64_t> next;
        std::uint64_t total = 0;
    };

    std::u32string make_context(std::u32string_view preceding) const;

    int order_;
    double add_k_;
    std::unordered_set<char32_t> vocab_;
    std::unordered_map<std::u32string, ContextStat> contexts_;
};

// Mean per-character log-probability of the sentence under the model,
// natural log. Always <= 0; throws if the model emits a probability <= 0.
double score_quality(const CharLanguageModel& lm, std::u32string_view prompt, const Sentence& s);

// Keeps the ceil(keep_ratio * N) best-scoring sentences, dropping the rest.
// Ties keep the earlier sentence id; surviving sentences stay in input order.
std::vector<Sentence> filter_corpus(const std::vector<Sentence>& sentences,
                                    const CharLanguageModel& lm, std::u32string_view prompt,
                                    double keep_ratio = 0.9);

}  // namespace seglearn
