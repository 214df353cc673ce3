#include "seglearn/bim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "seglearn/utf8.hpp"

namespace seglearn {

std::size_t SegmentedSentence::char_count() const {
    std::size_t n = 0;
    for (const auto& w : words) n += w.size();
    return n;
}

std::vector<std::size_t> SegmentedSentence::word_of_position() const {
    std::vector<std::size_t> ids;
    ids.reserve(char_count());
    for (std::size_t w = 0; w < words.size(); ++w)
        ids.insert(ids.end(), words[w].size(), w);
    return ids;
}

PairSample sample_pairs(const SegmentedSentence& s, std::size_t distance_limit,
                        bool strict_distance) {
    if (distance_limit < 1) throw std::invalid_argument("sample_pairs: distance limit must be >= 1");
    const auto word_of = s.word_of_position();
    const std::size_t n = word_of.size();
    PairSample out;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (word_of[a] == word_of[b]) {
                out.positives.emplace_back(a, b);
            } else {
                const std::size_t dis = b - a;
                if (strict_distance ? dis < distance_limit : dis <= distance_limit)
                    out.negatives.emplace_back(a, b);
            }
        }
    }
    return out;
}

namespace {

// cosine, or NaN when either vector has zero norm
double cosine(const double* u, const double* v, std::size_t d) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        dot += u[k] * v[k];
        nu += u[k] * u[k];
        nv += v[k] * v[k];
    }
    if (nu == 0.0 || nv == 0.0) return std::nan("");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace

BimReport compute_bim(const std::vector<Matrix>& embeddings,
                      const std::vector<SegmentedSentence>& corpus, std::size_t distance_limit,
                      bool strict_distance) {
    if (embeddings.size() != corpus.size())
        throw std::invalid_argument("compute_bim: embedding blocks and sentences misaligned");

    BimReport r;
    double sum_pos = 0.0, sum_neg = 0.0;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        const auto& seg = corpus[s];
        const Matrix& h = embeddings[s];
        if (h.rows != seg.char_count())
            throw std::invalid_argument("compute_bim: sentence " + std::to_string(s) +
                                        " has " + std::to_string(seg.char_count()) +
                                        " characters but " + std::to_string(h.rows) +
                                        " embedding rows");
        const PairSample pairs = sample_pairs(seg, distance_limit, strict_distance);
        for (const auto& [a, b] : pairs.positives) {
            const double c = cosine(h.row(a), h.row(b), h.cols);
            if (std::isnan(c)) { ++r.skipped_pairs; continue; }
            sum_pos += c;
            ++r.pos_pairs;
        }
        for (const auto& [a, b] : pairs.negatives) {
            const double c = cosine(h.row(a), h.row(b), h.cols);
            if (std::isnan(c)) { ++r.skipped_pairs; continue; }
            sum_neg += c;
            ++r.neg_pairs;
        }
    }
    if (r.pos_pairs == 0) throw std::runtime_error("compute_bim: no qualifying positive pairs");
    if (r.neg_pairs == 0) throw std::runtime_error("compute_bim: no qualifying negative pairs");
    r.sim_pos = sum_pos / static_cast<double>(r.pos_pairs);
    r.sim_neg = sum_neg / static_cast<double>(r.neg_pairs);
    r.bim = r.sim_pos - r.sim_neg;
    return r;
}

std::vector<SegmentedSentence> read_segmented(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open segmented file: " + path);
    std::vector<SegmentedSentence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        SegmentedSentence seg;
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto space = line.find(' ', start);
            const auto end = space == std::string::npos ? line.size() : space;
            if (end == start)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": empty word (stray space)");
            try {
                seg.words.push_back(utf8_decode(std::string_view(line).substr(start, end - start)));
            } catch (const Utf8Error& e) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.message);
            }
            if (space == std::string::npos) break;
            start = space + 1;
        }
        out.push_back(std::move(seg));
    }
    return out;
}

std::string serialize_segmented(const SegmentedSentence& s) {
    std::string out;
    for (std::size_t w = 0; w < s.words.size(); ++w) {
        if (w) out.push_back(' ');
        out += utf8_encode(s.words[w]);
    }
    return out;
}

std::string format_bim_report(const BimReport& r, bool tsv) {
    char buf[192];
    if (tsv) {
        std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%zu\t%zu", r.sim_pos, r.sim_neg, r.bim,
                      r.pos_pairs, r.neg_pairs);
    } else {
        std::snprintf(buf, sizeof(buf), "SIM_pos=%.6f SIM_neg=%.6f BIM=%.6f pos_pairs=%zu neg_pairs=%zu",
                      r.sim_pos, r.sim_neg, r.bim, r.pos_pairs, r.neg_pairs);
    }
    return buf;
}

}  // namespace seglearn
