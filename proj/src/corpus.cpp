#include "seglearn/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "seglearn/utf8.hpp"

namespace seglearn {

std::vector<Sentence> read_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);

    std::vector<Sentence> out;
    std::string line;
    std::size_t line_start = 0;  // byte offset of the current line
    std::size_t next_id = 0;
    while (std::getline(in, line)) {
        const std::size_t consumed = line.size() + 1;  // getline ate the '\n' (except maybe last line)
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) {
            try {
                out.push_back({next_id++, utf8_decode(line)});
            } catch (const Utf8Error& e) {
                throw std::runtime_error(path + ": invalid UTF-8 at byte offset " +
                                         std::to_string(line_start + e.byte_offset) + ": " + e.message);
            }
        }
        line_start += consumed;
    }
    if (in.bad()) throw std::runtime_error("I/O error reading " + path);
    return out;
}

std::vector<Sentence> deduplicate(const std::vector<Sentence>& sentences) {
    std::vector<Sentence> out;
    std::unordered_set<std::u32string> seen;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
        if (seen.insert(s.chars).second) out.push_back(s);
    }
    return out;
}

std::size_t ceil_fraction(double ratio, std::size_t n) {
    if (n == 0) return 0;
    auto k = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
    return k > n ? n : k;
}

void NGramCounts::merge(const NGramCounts& other) {
    if (window_totals.size() < other.window_totals.size())
        window_totals.resize(other.window_totals.size(), 0);
    for (std::size_t m = 0; m < other.window_totals.size(); ++m)
        window_totals[m] += other.window_totals[m];
    for (const auto& [gram, stat] : other.grams) {
        auto& mine = grams[gram];
        mine.count += stat.count;
        for (const auto& [c, n] : stat.left) mine.left[c] += n;
        for (const auto& [c, n] : stat.right) mine.right[c] += n;
    }
}

NGramCounts count_ngrams(const std::vector<Sentence>& sentences, int max_len) {
    if (max_len < 1) throw std::invalid_argument("count_ngrams: max_len must be >= 1");
    NGramCounts counts;
    counts.max_len = max_len;
    counts.window_totals.assign(static_cast<std::size_t>(max_len) + 1, 0);
    for (const auto& s : sentences) {
        const auto n = s.chars.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t longest = std::min<std::size_t>(max_len, n - i);
            for (std::size_t m = 1; m <= longest; ++m) {
                auto& stat = counts.grams[s.chars.substr(i, m)];
                stat.count += 1;
                counts.window_totals[m] += 1;
                const char32_t left = i > 0 ? s.chars[i - 1] : kEdgeNeighbor;
                const char32_t right = i + m < n ? s.chars[i + m] : kEdgeNeighbor;
                stat.left[left] += 1;
                stat.right[right] += 1;
            }
        }
    }
    return counts;
}

namespace {

double neighbor_entropy(const std::unordered_map<char32_t, std::uint64_t>& dist) {
    std::uint64_t total = 0;
    for (const auto& [c, n] : dist) total += n;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const auto& [c, n] : dist) {
        const double p = static_cast<double>(n) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h < 0.0 ? 0.0 : h;  // clamp -0.0 from rounding
}

}  // namespace

BoundaryDictionary compute_measures(const NGramCounts& counts) {
    if (counts.grams.empty()) throw std::invalid_argument("compute_measures: empty counts");

    const std::uint64_t total_single = counts.window_totals.size() > 1 ? counts.window_totals[1] : 0;
    std::uint64_t total_multi = 0;
    for (std::size_t m = 2; m < counts.window_totals.size(); ++m) total_multi += counts.window_totals[m];

    auto log_prob = [&](const std::u32string& gram) {
        auto it = counts.grams.find(gram);
        if (it == counts.grams.end() || it->second.count == 0)
            throw std::runtime_error("compute_measures: zero-count sub-part " + utf8_encode(gram));
        const std::uint64_t total = gram.size() == 1 ? total_single : total_multi;
        return std::log(static_cast<double>(it->second.count) / static_cast<double>(total));
    };

    BoundaryDictionary dict;
    dict.max_ngram_len = counts.max_len;
    dict.total_char_count = total_single;
    for (const auto& [gram, stat] : counts.grams) {
        NGramRecord rec;
        rec.gram = gram;
        rec.count = stat.count;
        rec.left_entropy = neighbor_entropy(stat.left);
        rec.right_entropy = neighbor_entropy(stat.right);
        if (gram.size() >= 2) {
            const double lp = log_prob(gram);
            double pmi = std::numeric_limits<double>::infinity();
            for (std::size_t split = 1; split < gram.size(); ++split) {
                const double v = lp - log_prob(gram.substr(0, split)) - log_prob(gram.substr(split));
                if (v < pmi) pmi = v;
            }
            rec.pmi = pmi;
        }
        dict.records.emplace(gram, std::move(rec));
    }
    return dict;
}

void write_dictionary(const BoundaryDictionary& dict, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[64];
    for (const auto& [gram, rec] : dict.records) {
        out << utf8_encode(gram) << '\t' << rec.count;
        std::snprintf(buf, sizeof(buf), "\t%.6f\t%.6f\t%.6f", rec.pmi, rec.left_entropy,
                      rec.right_entropy);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("I/O error writing " + path);
}

}  // namespace seglearn
