#include "seglearn/synthetic.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "seglearn/corpus.hpp"
#include "seglearn/rng.hpp"
#include "seglearn/utf8.hpp"

namespace seglearn {

namespace {

constexpr char32_t kAlphabetBase = 0x4E00;  // CJK ideographs; neither Latin nor punctuation

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
    if (spec.alphabet_size < 10) throw std::invalid_argument("gen_synthetic: alphabet too small");
    if (spec.min_words_per_sentence < 1 ||
        spec.min_words_per_sentence > spec.max_words_per_sentence)
        throw std::invalid_argument("gen_synthetic: bad words-per-sentence range");
    if (!(spec.seed_lexicon_ratio > 0.0 && spec.seed_lexicon_ratio <= 1.0))
        throw std::invalid_argument("gen_synthetic: seed_lexicon_ratio must be in (0, 1]");

    Rng rng(spec.seed);

    // The vocabulary is hierarchical: a 3-char word is a head character plus
    // a 2-char word, a 4-char word is a head plus a 3-char word. Nested parts
    // are themselves vocabulary entries, so word spans nest the way real
    // compounds do. Two character pools split the roles: word-internal
    // positions draw from the start pool, the last position from the final
    // pool. Every start-pool character opens some nested word and every
    // final-pool character closes one.
    const std::size_t n_start = spec.alphabet_size / 2;
    const std::size_t n_final = spec.alphabet_size - n_start;
    auto start_char = [&](std::uint64_t k) { return kAlphabetBase + static_cast<char32_t>(k); };
    auto final_char = [&](std::uint64_t k) {
        return kAlphabetBase + static_cast<char32_t>(n_start + k);
    };

    SyntheticData data;
    std::set<std::u32string> seen;
    std::vector<std::u32string> atoms, triples, quads;
    std::size_t guard = 0;
    auto extend = [&](const std::vector<std::u32string>& base, std::vector<std::u32string>& out,
                      std::size_t count) {
        while (out.size() < count) {
            if (++guard > 1000000)
                throw std::runtime_error("gen_synthetic: cannot draw enough distinct words; "
                                         "alphabet too small for the requested vocabulary");
            std::u32string w;
            w.push_back(start_char(rng.below(n_start)));
            if (base.empty()) {
                w.push_back(final_char(rng.below(n_final)));
            } else {
                w += base[rng.below(base.size())];
            }
            if (seen.insert(w).second) out.push_back(std::move(w));
        }
    };
    extend({}, atoms, spec.len2_words);
    extend(atoms, triples, spec.len3_words);
    extend(triples, quads, spec.len4_words);
    data.vocab = atoms;
    data.vocab.insert(data.vocab.end(), triples.begin(), triples.end());
    data.vocab.insert(data.vocab.end(), quads.begin(), quads.end());

    // Seed lexicon: a seeded sample without replacement.
    std::vector<std::size_t> idx(data.vocab.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    const std::size_t n_seed = ceil_fraction(spec.seed_lexicon_ratio, data.vocab.size());
    for (std::size_t i = 0; i < n_seed; ++i) data.seed_lexicon.push_back(data.vocab[idx[i]]);

    data.sentences.reserve(spec.num_sentences);
    const std::size_t span = spec.max_words_per_sentence - spec.min_words_per_sentence + 1;
    for (std::size_t s = 0; s < spec.num_sentences; ++s) {
        SegmentedSentence seg;
        const std::size_t n_words = spec.min_words_per_sentence + rng.below(span);
        for (std::size_t w = 0; w < n_words; ++w)
            seg.words.push_back(data.vocab[rng.below(data.vocab.size())]);
        data.sentences.push_back(std::move(seg));
    }
    return data;
}

void write_synthetic(const SyntheticData& data, const std::string& out_dir) {
    auto open = [&](const std::string& name) {
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_dir + "/" + name);
        return out;
    };
    {
        auto out = open("vocab.txt");
        for (const auto& w : data.vocab) out << utf8_encode(w) << '\n';
    }
    {
        auto out = open("seed_lexicon.txt");
        for (const auto& w : data.seed_lexicon) out << utf8_encode(w) << '\n';
    }
    {
        auto corpus = open("corpus.txt");
        auto gold = open("gold.txt");
        for (const auto& seg : data.sentences) {
            gold << serialize_segmented(seg) << '\n';
            for (const auto& w : seg.words) corpus << utf8_encode(w);
            corpus << '\n';
        }
    }
}

}  // namespace seglearn
