#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "seglearn/corpus.hpp"
#include "seglearn/matrix.hpp"

namespace seglearn {

struct EncoderConfig {
    std::map<char32_t, std::size_t> vocab;  // character -> embedding row, dense
    std::size_t embed_dim = 32;
    std::size_t window = 2;  // context half-width
    std::uint64_t seed = 0;

    // Unknown characters use a dedicated learned row appended after the vocab.
    std::size_t unk_row() const { return vocab.size(); }
    std::size_t rows() const { return vocab.size() + 1; }
    std::size_t row_of(char32_t c) const {
        auto it = vocab.find(c);
        return it == vocab.end() ? unk_row() : it->second;
    }
};

// Vocabulary from the corpus characters in code-point order.
EncoderConfig make_encoder_config(const std::vector<Sentence>& corpus, std::size_t embed_dim = 32,
                                  std::size_t window = 2, std::uint64_t seed = 0);

struct EncoderParams {
    Matrix embedding;         // rows() x embed_dim
    std::vector<double> mix;  // 2*window+1 scalars, index d+window for offset d
};

struct EncoderGrad {
    Matrix embedding;
    std::vector<double> mix;
};

// Embeddings uniform in [-0.1, 0.1] from the config seed; center mix weight 1,
// the rest 0.1. Same seed gives bit-identical parameters.
EncoderParams init_encoder(const EncoderConfig& cfg);

// h_i = tanh(sum_d mix[d] * emb(c_{i+d})), positions outside the sentence
// contributing nothing. Returns an n x embed_dim matrix.
Matrix encode(const EncoderConfig& cfg, const EncoderParams& params, const Sentence& s);

// Exact gradients of the forward formula for the upstream dL/dh; repeated
// characters accumulate into their shared row.
EncoderGrad encoder_backward(const EncoderConfig& cfg, const EncoderParams& params,
                             const Sentence& s, const Matrix& upstream);

// Embedding dump block: `#sid <id>`, then `n d`, then one line of d
// 6-decimal floats per character position.
void write_embedding_block(std::ostream& out, std::size_t sentence_id, const Matrix& h);

// Reads a concatenated dump (any number of blocks). A single-sentence file
// may omit the `#sid` line.
std::vector<std::pair<std::size_t, Matrix>> read_embedding_dump(const std::string& path);

}  // namespace seglearn
