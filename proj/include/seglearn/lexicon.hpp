#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "seglearn/corpus.hpp"

namespace seglearn {

enum class WordSource { kSeed, kPromoted };

struct Word {
    std::u32string chars;
    WordSource source = WordSource::kSeed;
    std::optional<int> promoted_at_iteration;
};

using Span = std::pair<std::size_t, std::size_t>;  // (i, j), 0-based inclusive

struct SpanLabeling {
    std::vector<Span> positives;   // spans covering a lexicon word
    std::vector<Span> unlabeled;   // everything else
};

// Word store plus the consecutive-positive counters that drive expansion.
// Counters are keyed by surface string: any occurrence of the same substring
// feeds the same counter, since the unit being promoted is a word type.
class Lexicon {
public:
    explicit Lexicon(int k_threshold = 5) : k_threshold_(k_threshold) {}

    bool contains(const std::u32string& w) const { return index_.count(w) > 0; }
    std::size_t size() const { return words_.size(); }
    const std::vector<Word>& words() const { return words_; }
    int k_threshold() const { return k_threshold_; }

    void add_seed(const std::u32string& w);

    // Feeds one sentence's predictions over its unlabeled spans, in span
    // order. A positive prediction increments the substring's counter, a
    // negative one resets it to 0. Counters that reach k are retired and the
    // word is returned for commit_promotions at the next iteration boundary.
    // A span whose substring is already a lexicon word is a labeling bug.
    std::vector<std::u32string> record_and_promote(std::size_t sentence_id,
                                                   const std::map<Span, bool>& predictions,
                                                   const Sentence& sentence);

    // Epoch-granular counter update used by the training loop: one tick per
    // surface string per epoch. `positive` must already aggregate the
    // epoch's occurrences (all positive = true, any negative = false).
    std::vector<std::u32string> record_epoch_outcomes(
        const std::map<std::u32string, bool>& outcomes);

    // Inserts staged words as source=promoted at the given iteration.
    void commit_promotions(const std::vector<std::u32string>& words, int iteration);

    std::size_t pending_count() const { return pending_.size(); }

private:
    bool feed_event(const std::u32string& gram, bool positive,
                    std::vector<std::u32string>& promoted);

    int k_threshold_;
    std::vector<Word> words_;
    std::unordered_map<std::u32string, std::size_t> index_;
    std::unordered_map<std::u32string, int> pending_;
};

// Applies the lexicon quality rules to a raw word set: keep lengths 2-4,
// drop words containing punctuation or Latin letters, then drop any word
// that is a proper substring of another survivor.
Lexicon filter_rules(const std::set<std::u32string>& raw_words, int k_threshold = 5);

// All (i, j) with j-i+1 in [min_len, max_len], ascending by i then j.
std::vector<Span> enumerate_spans(std::size_t n, std::size_t min_len = 2, std::size_t max_len = 4);

SpanLabeling label_spans(const Sentence& s, const Lexicon& lex);

// Lexicon file: `word<TAB>source<TAB>iteration`, one word per line, sorted by
// word. Seed rows omit the iteration column; bare one-column rows are
// accepted on input and treated as seeds.
void write_lexicon(const Lexicon& lex, const std::string& path);
Lexicon read_lexicon(const std::string& path, int k_threshold = 5);

}  // namespace seglearn
