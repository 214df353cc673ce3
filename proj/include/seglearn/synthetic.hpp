#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seglearn/bim.hpp"

namespace seglearn {

// Synthetic segmentation benchmark with a hierarchical vocabulary: longer
// words extend shorter ones by a head character, so word spans nest the way
// compounds do in real segmentation data. Character pools are split by role,
// which keeps wordhood decidable from local context at desk scale while
// cross-word spans still produce hard negatives.
struct SyntheticSpec {
    std::uint64_t seed = 0;
    std::size_t alphabet_size = 100;
    std::size_t len2_words = 75;
    std::size_t len3_words = 125;
    std::size_t len4_words = 300;
    std::size_t num_sentences = 20000;
    std::size_t min_words_per_sentence = 2;
    std::size_t max_words_per_sentence = 4;
    double seed_lexicon_ratio = 0.4;

    std::size_t vocab_size() const { return len2_words + len3_words + len4_words; }
};

struct SyntheticData {
    std::vector<std::u32string> vocab;          // the full ground-truth vocabulary
    std::vector<std::u32string> seed_lexicon;   // the sampled known subset
    std::vector<SegmentedSentence> sentences;   // gold segmentation; corpus = flattened
};

SyntheticData gen_synthetic(const SyntheticSpec& spec);

// Writes vocab.txt, seed_lexicon.txt, corpus.txt and gold.txt into out_dir.
void write_synthetic(const SyntheticData& data, const std::string& out_dir);

}  // namespace seglearn
