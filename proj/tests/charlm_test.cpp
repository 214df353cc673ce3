#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "seglearn/charlm.hpp"
#include "seglearn/rng.hpp"

using namespace seglearn;

namespace {

struct UniformLm final : CharLanguageModel {
    std::size_t v;
    explicit UniformLm(std::size_t vocab) : v(vocab) {}
    double prob(char32_t, std::u32string_view, std::u32string_view) const override {
        return 1.0 / static_cast<double>(v);
    }
    std::size_t vocab_size() const override { return v; }
};

struct CertainLm final : CharLanguageModel {
    double prob(char32_t, std::u32string_view, std::u32string_view) const override { return 1.0; }
    std::size_t vocab_size() const override { return 1; }
};

struct BrokenLm final : CharLanguageModel {
    double prob(char32_t, std::u32string_view, std::u32string_view) const override { return 0.0; }
    std::size_t vocab_size() const override { return 1; }
};

std::vector<Sentence> make_corpus(const std::vector<std::u32string>& lines) {
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < lines.size(); ++i) out.push_back({i, lines[i]});
    return out;
}

}  // namespace

TEST_CASE("uniform model scores -ln V") {
    UniformLm lm(10);
    CHECK(score_quality(lm, U"", {0, U"abcde"}) == doctest::Approx(-std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("certainty scores zero") {
    CertainLm lm;
    CHECK(score_quality(lm, U"", {0, U"abc"}) == 0.0);
}

TEST_CASE("probability <= 0 is a contract violation") {
    BrokenLm lm;
    CHECK_THROWS_AS(score_quality(lm, U"", {0, U"a"}), std::runtime_error);
}

TEST_CASE("bigram model matches hand-tabulated add-k arithmetic") {
    // corpus {"ab", "ba"}: BOS->a:1, BOS->b:1; a->b:1; b->a:1. V = {a, b} + unk.
    NgramCharLm lm(2, 0.01);
    lm.train(make_corpus({U"ab", U"ba"}));
    REQUIRE(lm.vocab_size() == 3);

    const double p_a_bos = (1 + 0.01) / (2 + 0.01 * 3);
    const double p_b_a = (1 + 0.01) / (1 + 0.01 * 3);
    const double p_a_b = (1 + 0.01) / (1 + 0.01 * 3);
    const double expect = (std::log(p_a_bos) + std::log(p_b_a) + std::log(p_a_b)) / 3.0;
    CHECK(expect == doctest::Approx(-0.24576746832576).epsilon(1e-12));
    CHECK(score_quality(lm, U"", {0, U"aba"}) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("conditional distribution sums to one and stays above zero") {
    NgramCharLm lm(3, 0.01);
    lm.train(make_corpus({U"abcab", U"bca", U"aa"}));
    const std::u32string vocab = U"abc";
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::u32string ctx;
        const auto len = rng.below(5);
        for (std::size_t i = 0; i < len; ++i)
            ctx.push_back(vocab[rng.below(vocab.size())]);
        double sum = 0.0;
        for (char32_t c : vocab) {
            const double p = lm.prob(c, ctx, U"");
            CHECK(p > 0.0);
            sum += p;
        }
        sum += lm.prob(U'z', ctx, U"");  // the unknown bucket completes the vocabulary
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("scores are never positive") {
    NgramCharLm lm(3, 0.01);
    lm.train(make_corpus({U"abab", U"bb", U"aab"}));
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::u32string s;
        const auto len = 1 + rng.below(8);
        for (std::size_t i = 0; i < len; ++i)
            s.push_back(U'a' + static_cast<char32_t>(rng.below(3)));
        CHECK(score_quality(lm, U"", {0, s}) <= 0.0);
    }
}

TEST_CASE("filter_corpus keeps ceil(keep_ratio * N)") {
    UniformLm lm(4);
    std::vector<std::u32string> lines;
    for (int i = 0; i < 10; ++i) lines.push_back(U"ab");
    const auto kept = filter_corpus(make_corpus(lines), lm, U"", 0.9);
    CHECK(kept.size() == 9);  // ten in, nine out

    const auto all = filter_corpus(make_corpus(lines), lm, U"", 1.0);
    CHECK(all.size() == 10);
}

namespace {

// fixed per-sentence scores keyed by first character
struct TableLm final : CharLanguageModel {
    double prob(char32_t c, std::u32string_view, std::u32string_view) const override {
        return std::exp(-static_cast<double>(c - U'a') - 1.0);
    }
    std::size_t vocab_size() const override { return 26; }
};

}  // namespace

TEST_CASE("filter_corpus drops exactly the low scorers, earlier id wins ties") {
    // single-char sentences scoring -1, -3, -2, -3
    TableLm lm;
    const auto corpus = make_corpus({U"a", U"c", U"b", U"c"});
    const auto kept = filter_corpus(corpus, lm, U"", 0.5);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].chars == U"a");
    CHECK(kept[1].chars == U"b");

    // the tie at -3: with keep_ratio 0.75 only one of the two goes, the
    // earlier id survives
    const auto kept3 = filter_corpus(corpus, lm, U"", 0.75);
    REQUIRE(kept3.size() == 3);
    CHECK(kept3[0].chars == U"a");
    CHECK(kept3[1].chars == U"c");
    CHECK(kept3[1].id == 1);
    CHECK(kept3[2].chars == U"b");
}

TEST_CASE("filter_corpus empty input and bad ratio") {
    UniformLm lm(4);
    CHECK(filter_corpus({}, lm, U"", 0.9).empty());
    CHECK_THROWS_AS(filter_corpus({}, lm, U"", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(filter_corpus({}, lm, U"", 1.5), std::invalid_argument);
}

TEST_CASE("filter_corpus size and dominance against a sort oracle") {
    NgramCharLm lm(2, 0.01);
    lm.train(make_corpus({U"abcd", U"dcba", U"aabb"}));
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::u32string> lines;
        const auto n = rng.below(40);
        for (std::size_t i = 0; i < n; ++i) {
            std::u32string s;
            const auto len = 1 + rng.below(6);
            for (std::size_t k = 0; k < len; ++k)
                s.push_back(U'a' + static_cast<char32_t>(rng.below(4)));
            lines.push_back(s);
        }
        const auto corpus = make_corpus(lines);
        const std::uint64_t q = 1 + rng.below(20);
        const std::uint64_t p = 1 + rng.below(q);
        const double ratio = static_cast<double>(p) / static_cast<double>(q);

        const auto kept = filter_corpus(corpus, lm, U"", ratio);
        CHECK(kept.size() == (p * n + q - 1) / q);

        // order preserved
        for (std::size_t i = 1; i < kept.size(); ++i) CHECK(kept[i - 1].id < kept[i].id);

        // every removed score <= every kept score
        std::vector<double> scores;
        for (const auto& s : corpus) scores.push_back(score_quality(lm, U"", s));
        std::vector<bool> is_kept(n, false);
        for (const auto& s : kept) is_kept[s.id] = true;
        double max_removed = -1e300, min_kept = 1e300;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_kept[i]) min_kept = std::min(min_kept, scores[i]);
            else max_removed = std::max(max_removed, scores[i]);
        }
        if (kept.size() < n && !kept.empty()) CHECK(max_removed <= min_kept);
    }
}
