#include "seglearn/charlm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seglearn {

namespace {

constexpr char32_t kBos = 0xFFFE;  // sentence-start padding, never predicted
constexpr char32_t kUnk = 0xFFFD;  // stand-in for characters outside the vocabulary

}  // namespace

NgramCharLm::NgramCharLm(int order, double add_k) : order_(order), add_k_(add_k) {
    if (order < 1) throw std::invalid_argument("NgramCharLm: order must be >= 1");
    if (add_k <= 0.0) throw std::invalid_argument("NgramCharLm: add_k must be > 0");
}

std::u32string NgramCharLm::make_context(std::u32string_view preceding) const {
    const auto ctx_len = static_cast<std::size_t>(order_ - 1);
    std::u32string ctx;
    ctx.reserve(ctx_len);
    if (preceding.size() < ctx_len) ctx.assign(ctx_len - preceding.size(), kBos);
    const auto tail = preceding.substr(preceding.size() - std::min(preceding.size(), ctx_len));
    for (char32_t c : tail) ctx.push_back(vocab_.count(c) || c == kBos ? c : kUnk);
    return ctx;
}

void NgramCharLm::train(const std::vector<Sentence>& sentences) {
    vocab_.clear();
    contexts_.clear();
    for (const auto& s : sentences)
        for (char32_t c : s.chars) vocab_.insert(c);
    for (const auto& s : sentences) {
        for (std::size_t i = 0; i < s.chars.size(); ++i) {
            auto ctx = make_context(std::u32string_view(s.chars).substr(0, i));
            auto& stat = contexts_[ctx];
            stat.next[s.chars[i]] += 1;
            stat.total += 1;
        }
    }
}

std::size_t NgramCharLm::vocab_size() const { return vocab_.size() + 1; }

double NgramCharLm::prob(char32_t c, std::u32string_view preceding,
                         std::u32string_view /*prompt*/) const {
    const auto ctx = make_context(preceding);
    const char32_t ch = vocab_.count(c) ? c : kUnk;
    const double v = static_cast<double>(vocab_size());
    auto it = contexts_.find(ctx);
    if (it == contexts_.end()) return 1.0 / v;
    std::uint64_t n = 0;
    auto jt = it->second.next.find(ch);
    if (jt != it->second.next.end()) n = jt->second;
    return (static_cast<double>(n) + add_k_) /
           (static_cast<double>(it->second.total) + add_k_ * v);
}

double score_quality(const CharLanguageModel& lm, std::u32string_view prompt, const Sentence& s) {
    if (s.chars.empty()) throw std::invalid_argument("score_quality: empty sentence");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.chars.size(); ++i) {
        const double p = lm.prob(s.chars[i], std::u32string_view(s.chars).substr(0, i), prompt);
        if (p <= 0.0)
            throw std::runtime_error("score_quality: model returned probability <= 0 "
                                     "(smoothing contract violated)");
        sum += std::log(p);
    }
    return sum / static_cast<double>(s.chars.size());
}

std::vector<Sentence> filter_corpus(const std::vector<Sentence>& sentences,
                                    const CharLanguageModel& lm, std::u32string_view prompt,
                                    double keep_ratio) {
    if (keep_ratio <= 0.0 || keep_ratio > 1.0)
        throw std::invalid_argument("filter_corpus: keep_ratio must be in (0, 1]");
    const std::size_t n = sentences.size();
    if (n == 0) return {};

    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = score_quality(lm, prompt, sentences[i]);

    // Drop the N - ceil(keep_ratio * N) lowest scores; on ties the later
    // sentence id goes first so earlier sentences survive.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) return score[a] < score[b];
        return sentences[a].id > sentences[b].id;
    });
    const std::size_t keep = ceil_fraction(keep_ratio, n);
    std::vector<bool> removed(n, false);
    for (std::size_t r = 0; r < n - keep; ++r) removed[order[r]] = true;

    std::vector<Sentence> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) out.push_back(sentences[i]);
    return out;
}

}  // namespace seglearn
