#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seglearn/matrix.hpp"

namespace seglearn {

struct SegmentedSentence {
    std::vector<std::u32string> words;  // nonempty, concatenation = raw sentence

    std::size_t char_count() const;
    // word index for every flattened character position
    std::vector<std::size_t> word_of_position() const;
};

using PositionPair = std::pair<std::size_t, std::size_t>;  // (a, b), a < b

struct PairSample {
    std::vector<PositionPair> positives;  // same word
    std::vector<PositionPair> negatives;  // different words, b - a within the bound
};

// Positive pairs: all unordered position pairs inside one word. Negative
// pairs: pairs crossing a word boundary with distance b - a <= L (or < L in
// strict mode). Enumeration is exhaustive, so the metric's expectation is
// realized as the plain mean over all qualifying pairs.
PairSample sample_pairs(const SegmentedSentence& s, std::size_t distance_limit = 2,
                        bool strict_distance = false);

struct BimReport {
    double sim_pos = 0.0;
    double sim_neg = 0.0;
    double bim = 0.0;  // always sim_pos - sim_neg
    std::size_t pos_pairs = 0;
    std::size_t neg_pairs = 0;
    std::size_t skipped_pairs = 0;  // pairs dropped for a zero-norm vector
};

// Mean cosine over all positive / negative pairs of the corpus, pair-uniform.
// embeddings[k] holds one row per character of corpus[k]. Zero-norm vectors
// skip their pair (counted); no qualifying pair of either kind is an error.
BimReport compute_bim(const std::vector<Matrix>& embeddings,
                      const std::vector<SegmentedSentence>& corpus,
                      std::size_t distance_limit = 2, bool strict_distance = false);

// One sentence per line, words separated by single spaces. An empty word
// (leading/trailing/double space) is a parse error reported with its line.
std::vector<SegmentedSentence> read_segmented(const std::string& path);

std::string serialize_segmented(const SegmentedSentence& s);

// `SIM_pos=... SIM_neg=... BIM=... pos_pairs=... neg_pairs=...` or the
// tab-separated variant, floats with 6 decimals.
std::string format_bim_report(const BimReport& r, bool tsv = false);

}  // namespace seglearn
