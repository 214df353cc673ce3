#include "seglearn/encoder.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "seglearn/rng.hpp"

namespace seglearn {

EncoderConfig make_encoder_config(const std::vector<Sentence>& corpus, std::size_t embed_dim,
                                  std::size_t window, std::uint64_t seed) {
    if (embed_dim < 2) throw std::invalid_argument("encoder: embed_dim must be >= 2");
    EncoderConfig cfg;
    cfg.embed_dim = embed_dim;
    cfg.window = window;
    cfg.seed = seed;
    std::set<char32_t> chars;
    for (const auto& s : corpus)
        for (char32_t c : s.chars) chars.insert(c);
    std::size_t next = 0;
    for (char32_t c : chars) cfg.vocab.emplace(c, next++);
    return cfg;
}

EncoderParams init_encoder(const EncoderConfig& cfg) {
    EncoderParams p;
    p.embedding = Matrix(cfg.rows(), cfg.embed_dim);
    Rng rng(cfg.seed);
    for (auto& v : p.embedding.data) v = rng.uniform(-0.1, 0.1);
    p.mix.assign(2 * cfg.window + 1, 0.1);
    p.mix[cfg.window] = 1.0;
    return p;
}

Matrix encode(const EncoderConfig& cfg, const EncoderParams& params, const Sentence& s) {
    const auto n = s.chars.size();
    const auto d = cfg.embed_dim;
    const auto w = static_cast<std::ptrdiff_t>(cfg.window);
    Matrix h(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        double* hi = h.row(i);
        for (std::ptrdiff_t off = -w; off <= w; ++off) {
            const auto pos = static_cast<std::ptrdiff_t>(i) + off;
            if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) continue;
            const double m = params.mix[static_cast<std::size_t>(off + w)];
            const double* emb = params.embedding.row(cfg.row_of(s.chars[static_cast<std::size_t>(pos)]));
            for (std::size_t k = 0; k < d; ++k) hi[k] += m * emb[k];
        }
        for (std::size_t k = 0; k < d; ++k) hi[k] = std::tanh(hi[k]);
    }
    return h;
}

EncoderGrad encoder_backward(const EncoderConfig& cfg, const EncoderParams& params,
                             const Sentence& s, const Matrix& upstream) {
    const auto n = s.chars.size();
    const auto d = cfg.embed_dim;
    if (upstream.rows != n || upstream.cols != d)
        throw std::logic_error("encoder_backward: upstream gradient shape mismatch");

    const Matrix h = encode(cfg, params, s);
    EncoderGrad g;
    g.embedding = Matrix(cfg.rows(), d);
    g.mix.assign(params.mix.size(), 0.0);

    const auto w = static_cast<std::ptrdiff_t>(cfg.window);
    std::vector<double> da(d);  // dL/d(pre-activation) for one position
    for (std::size_t i = 0; i < n; ++i) {
        const double* hi = h.row(i);
        const double* ui = upstream.row(i);
        for (std::size_t k = 0; k < d; ++k) da[k] = ui[k] * (1.0 - hi[k] * hi[k]);
        for (std::ptrdiff_t off = -w; off <= w; ++off) {
            const auto pos = static_cast<std::ptrdiff_t>(i) + off;
            if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) continue;
            const auto mix_idx = static_cast<std::size_t>(off + w);
            const auto row = cfg.row_of(s.chars[static_cast<std::size_t>(pos)]);
            const double* emb = params.embedding.row(row);
            double* gemb = g.embedding.row(row);
            const double m = params.mix[mix_idx];
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dot += da[k] * emb[k];
                gemb[k] += m * da[k];
            }
            g.mix[mix_idx] += dot;
        }
    }
    return g;
}

void write_embedding_block(std::ostream& out, std::size_t sentence_id, const Matrix& h) {
    out << "#sid " << sentence_id << '\n' << h.rows << ' ' << h.cols << '\n';
    char buf[32];
    for (std::size_t r = 0; r < h.rows; ++r) {
        const double* row = h.row(r);
        for (std::size_t c = 0; c < h.cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.6f", row[c]);
            if (c) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

std::vector<std::pair<std::size_t, Matrix>> read_embedding_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embedding dump: " + path);
    std::vector<std::pair<std::size_t, Matrix>> blocks;
    std::string line;
    std::size_t lineno = 0;
    std::size_t implicit_sid = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t sid = implicit_sid;
        if (line.rfind("#sid", 0) == 0) {
            sid = std::stoull(line.substr(5));
            if (!std::getline(in, line))
                throw std::runtime_error(path + ": missing size line after #sid");
            ++lineno;
        }
        std::size_t n = 0, d = 0;
        if (std::sscanf(line.c_str(), "%zu %zu", &n, &d) != 2 || d == 0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad size line");
        Matrix m(n, d);
        for (std::size_t r = 0; r < n; ++r) {
            if (!std::getline(in, line))
                throw std::runtime_error(path + ": truncated embedding block");
            ++lineno;
            const char* p = line.c_str();
            char* end = nullptr;
            for (std::size_t c = 0; c < d; ++c) {
                m.at(r, c) = std::strtod(p, &end);
                if (end == p)
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": expected " + std::to_string(d) + " floats");
                p = end;
            }
        }
        blocks.emplace_back(sid, std::move(m));
        implicit_sid = sid + 1;
    }
    return blocks;
}

}  // namespace seglearn
