#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace seglearn {

struct Sentence {
    std::size_t id = 0;       // 0-based line index among non-blank lines
    std::u32string chars;
};

// Sentence-edge occurrences of a gram record their missing neighbor under
// this reserved symbol so they still contribute to the entropy estimates.
constexpr char32_t kEdgeNeighbor = 0xFFFF;

// Reads a UTF-8 corpus, one sentence per line. Blank lines are skipped,
// a single trailing '\r' per line is stripped. Invalid UTF-8 aborts with
// the absolute byte offset of the offending byte.
std::vector<Sentence> read_corpus(const std::string& path);

// Keeps the first occurrence of each exact character sequence, preserving
// order and sentence ids.
std::vector<Sentence> deduplicate(const std::vector<Sentence>& sentences);

// ceil(ratio * n) guarded against the product landing a few ulps above an
// exact integer.
std::size_t ceil_fraction(double ratio, std::size_t n);

struct GramStat {
    std::uint64_t count = 0;
    std::unordered_map<char32_t, std::uint64_t> left;   // neighbor char -> count
    std::unordered_map<char32_t, std::uint64_t> right;
};

struct NGramCounts {
    int max_len = 4;
    std::unordered_map<std::u32string, GramStat> grams;
    std::vector<std::uint64_t> window_totals;  // window_totals[m] = #windows of length m

    // Associative merge; shard counts combined in any order give the same totals.
    void merge(const NGramCounts& other);
};

// Counts every contiguous window of length 1..max_len within each sentence,
// plus the left/right single-character neighbor distribution per gram.
NGramCounts count_ngrams(const std::vector<Sentence>& sentences, int max_len = 4);

struct NGramRecord {
    std::u32string gram;
    std::uint64_t count = 0;
    double pmi = 0.0;            // nats; min over split points
    double left_entropy = 0.0;   // nats
    double right_entropy = 0.0;  // nats
};

struct BoundaryDictionary {
    std::map<std::u32string, NGramRecord> records;  // keyed by gram, code-point order
    std::uint64_t total_char_count = 0;
    int max_ngram_len = 4;
};

// PMI(g) = min over splits of ln P(g) - ln P(left) - ln P(right), where a
// single character is measured against all length-1 windows and a longer
// part against the pool of all windows of length 2..max_len. LE/RE are the
// Shannon entropies of the neighbor distributions. Length-1 grams carry
// PMI = 0 by convention.
BoundaryDictionary compute_measures(const NGramCounts& counts);

// Tab-separated `gram count pmi le re`, 6-decimal floats, grams in
// code-point order. Byte-identical across runs for the same corpus.
void write_dictionary(const BoundaryDictionary& dict, const std::string& path);

}  // namespace seglearn
