#include "seglearn/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "seglearn/unicode.hpp"
#include "seglearn/utf8.hpp"

namespace seglearn {

void Lexicon::add_seed(const std::u32string& w) {
    if (w.size() < 2 || w.size() > 4)
        throw std::invalid_argument("lexicon: seed word length must be 2-4: " + utf8_encode(w));
    if (index_.count(w)) return;
    index_.emplace(w, words_.size());
    words_.push_back({w, WordSource::kSeed, std::nullopt});
}

bool Lexicon::feed_event(const std::u32string& gram, bool positive,
                         std::vector<std::u32string>& promoted) {
    if (contains(gram))
        throw std::logic_error("record_and_promote: span already in lexicon: " +
                               utf8_encode(gram));
    if (!positive) {
        auto it = pending_.find(gram);
        if (it != pending_.end()) it->second = 0;
        return false;
    }
    int& counter = pending_[gram];
    ++counter;
    if (counter >= k_threshold_) {
        pending_.erase(gram);
        promoted.push_back(gram);
        return true;
    }
    return false;
}

std::vector<std::u32string> Lexicon::record_and_promote(std::size_t /*sentence_id*/,
                                                        const std::map<Span, bool>& predictions,
                                                        const Sentence& sentence) {
    std::vector<std::u32string> promoted;
    for (const auto& [span, positive] : predictions)
        feed_event(sentence.chars.substr(span.first, span.second - span.first + 1), positive,
                   promoted);
    return promoted;
}

std::vector<std::u32string> Lexicon::record_epoch_outcomes(
    const std::map<std::u32string, bool>& outcomes) {
    std::vector<std::u32string> promoted;
    for (const auto& [gram, positive] : outcomes) feed_event(gram, positive, promoted);
    return promoted;
}

void Lexicon::commit_promotions(const std::vector<std::u32string>& words, int iteration) {
    for (const auto& w : words) {
        if (w.size() < 2 || w.size() > 4)
            throw std::invalid_argument("lexicon: promoted word length must be 2-4: " +
                                        utf8_encode(w));
        if (index_.count(w)) continue;  // may be staged twice across sentences
        index_.emplace(w, words_.size());
        words_.push_back({w, WordSource::kPromoted, iteration});
        pending_.erase(w);
    }
}

Lexicon filter_rules(const std::set<std::u32string>& raw_words, int k_threshold) {
    std::vector<std::u32string> clean;
    for (const auto& w : raw_words) {
        if (w.size() < 2 || w.size() > 4) continue;
        bool bad = false;
        for (char32_t c : w)
            if (is_punctuation(c) || is_latin_letter(c)) { bad = true; break; }
        if (!bad) clean.push_back(w);
    }
    // Nested-word rule: the shorter of any substring pair goes. A word equal
    // to another is the same set element, so only proper containment matters.
    Lexicon lex(k_threshold);
    for (const auto& w : clean) {
        bool nested = false;
        for (const auto& v : clean) {
            if (v.size() > w.size() && v.find(w) != std::u32string::npos) { nested = true; break; }
        }
        if (!nested) lex.add_seed(w);
    }
    return lex;
}

std::vector<Span> enumerate_spans(std::size_t n, std::size_t min_len, std::size_t max_len) {
    if (min_len < 2 || max_len > 4 || min_len > max_len)
        throw std::invalid_argument("enumerate_spans: length bounds must satisfy 2 <= min <= max <= 4");
    std::vector<Span> spans;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t longest = std::min(max_len, n - i);
        for (std::size_t m = min_len; m <= longest; ++m) spans.emplace_back(i, i + m - 1);
    }
    return spans;
}

SpanLabeling label_spans(const Sentence& s, const Lexicon& lex) {
    SpanLabeling out;
    for (const auto& span : enumerate_spans(s.chars.size())) {
        auto gram = s.chars.substr(span.first, span.second - span.first + 1);
        (lex.contains(gram) ? out.positives : out.unlabeled).push_back(span);
    }
    return out;
}

void write_lexicon(const Lexicon& lex, const std::string& path) {
    std::vector<const Word*> sorted;
    sorted.reserve(lex.words().size());
    for (const auto& w : lex.words()) sorted.push_back(&w);
    std::sort(sorted.begin(), sorted.end(),
              [](const Word* a, const Word* b) { return a->chars < b->chars; });

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const Word* w : sorted) {
        out << utf8_encode(w->chars);
        if (w->source == WordSource::kPromoted)
            out << "\tpromoted\t" << (w->promoted_at_iteration ? *w->promoted_at_iteration : 0);
        else
            out << "\tseed\t-";
        out << '\n';
    }
    if (!out) throw std::runtime_error("I/O error writing " + path);
}

Lexicon read_lexicon(const std::string& path, int k_threshold) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
    Lexicon lex(k_threshold);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::u32string> promoted;
    std::vector<int> promoted_iter;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const std::string word_utf8 = line.substr(0, tab1);
        std::u32string word;
        try {
            word = utf8_decode(word_utf8);
        } catch (const Utf8Error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.message);
        }
        if (word.size() < 2 || word.size() > 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": word length must be 2-4: " + word_utf8);
        if (tab1 == std::string::npos) {
            lex.add_seed(word);
            continue;
        }
        const auto tab2 = line.find('\t', tab1 + 1);
        const std::string source = line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (source == "seed") {
            lex.add_seed(word);
        } else if (source == "promoted") {
            int iter = 0;
            if (tab2 != std::string::npos) iter = std::stoi(line.substr(tab2 + 1));
            promoted.push_back(word);
            promoted_iter.push_back(iter);
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown word source '" + source + "'");
        }
    }
    for (std::size_t i = 0; i < promoted.size(); ++i)
        lex.commit_promotions({promoted[i]}, promoted_iter[i]);
    return lex;
}

}  // namespace seglearn
