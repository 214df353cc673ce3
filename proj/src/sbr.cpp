#include "seglearn/sbr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "seglearn/rng.hpp"

namespace seglearn {

namespace {

constexpr double kProbFloor = 1e-7;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double clip_prob(double p) {
    return std::min(1.0 - kProbFloor, std::max(kProbFloor, p));
}

}  // namespace

ClassifierParams zero_classifier(std::size_t embed_dim) {
    return {std::vector<double>(2 * embed_dim, 0.0), 0.0};
}

double classify_span(const double* h_i, const double* h_j, std::size_t embed_dim,
                     const ClassifierParams& params) {
    if (params.w.size() != 2 * embed_dim)
        throw std::logic_error("classify_span: weight/embedding dimension mismatch");
    double z = params.b;
    for (std::size_t k = 0; k < embed_dim; ++k) {
        z += params.w[k] * h_i[k];
        z += params.w[embed_dim + k] * h_j[k];
    }
    return sigmoid(z);
}

double pu_loss_grad(const std::vector<double>& pos_probs, const std::vector<double>& unl_probs,
                    const PUConfig& cfg, std::vector<double>& d_pos, std::vector<double>& d_unl) {
    if (pos_probs.empty() && unl_probs.empty())
        throw std::invalid_argument("pu_loss: batch has neither positive nor unlabeled examples");
    d_pos.assign(pos_probs.size(), 0.0);
    d_unl.assign(unl_probs.size(), 0.0);

    const double np = static_cast<double>(pos_probs.size());
    const double nu = static_cast<double>(unl_probs.size());

    double pos_as_pos = 0.0;  // mean(-ln p) over positives
    double pos_as_neg = 0.0;  // mean(-ln(1-p)) over positives
    for (double p : pos_probs) {
        const double pc = clip_prob(p);
        pos_as_pos -= std::log(pc);
        pos_as_neg -= std::log(1.0 - pc);
    }
    if (!pos_probs.empty()) {
        pos_as_pos /= np;
        pos_as_neg /= np;
    }
    double unl_as_neg = 0.0;  // mean(-ln(1-p)) over unlabeled
    for (double p : unl_probs) unl_as_neg -= std::log(1.0 - clip_prob(p));
    if (!unl_probs.empty()) unl_as_neg /= nu;

    const double corrected = unl_as_neg - cfg.pi_p * pos_as_neg;
    const bool clamped = corrected <= 0.0;
    const double loss = cfg.gamma * cfg.pi_p * pos_as_pos + (clamped ? 0.0 : corrected);

    for (std::size_t i = 0; i < pos_probs.size(); ++i) {
        const double p = pos_probs[i];
        if (p != clip_prob(p)) continue;  // flat region past the clip
        double d = cfg.gamma * cfg.pi_p * (-1.0 / p) / np;
        if (!clamped) d -= cfg.pi_p * (1.0 / (1.0 - p)) / np;
        d_pos[i] = d;
    }
    if (!clamped) {
        for (std::size_t i = 0; i < unl_probs.size(); ++i) {
            const double p = unl_probs[i];
            if (p != clip_prob(p)) continue;
            d_unl[i] = (1.0 / (1.0 - p)) / nu;
        }
    }
    return loss;
}

double pu_loss(const std::vector<double>& pos_probs, const std::vector<double>& unl_probs,
               const PUConfig& cfg) {
    std::vector<double> d_pos, d_unl;
    return pu_loss_grad(pos_probs, unl_probs, cfg, d_pos, d_unl);
}

namespace {

struct SpanRef {
    std::size_t sentence;  // index within the batch
    Span span;
};

struct EvalCounts {
    std::size_t tp = 0, fp = 0, fn = 0;
};

void eval_heldout(const HeldoutSet& heldout, const EncoderConfig& enc_cfg,
                  const EncoderParams& encoder, const ClassifierParams& classifier,
                  double threshold, EpochMetrics& m) {
    EvalCounts c;
    for (std::size_t s = 0; s < heldout.sentences.size(); ++s) {
        const auto& sent = heldout.sentences[s];
        const auto& truth = heldout.true_spans[s];
        const Matrix h = encode(enc_cfg, encoder, sent);
        for (const auto& span : enumerate_spans(sent.chars.size())) {
            const double p =
                classify_span(h.row(span.first), h.row(span.second), enc_cfg.embed_dim, classifier);
            const bool predicted = p >= threshold;
            const bool actual = truth.count(span) > 0;
            if (predicted && actual) ++c.tp;
            else if (predicted) ++c.fp;
            else if (actual) ++c.fn;
        }
    }
    m.heldout_precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    m.heldout_recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    const double pr = m.heldout_precision + m.heldout_recall;
    m.heldout_f1 = pr > 0.0 ? 2.0 * m.heldout_precision * m.heldout_recall / pr : 0.0;
}

}  // namespace

TrainResult train_sbr(const std::vector<Sentence>& train_sentences, const HeldoutSet& heldout,
                      const EncoderConfig& enc_cfg, EncoderParams encoder,
                      ClassifierParams classifier, Lexicon lexicon, const PUConfig& pu,
                      const TrainConfig& tc) {
    if (train_sentences.empty()) throw std::invalid_argument("train_sbr: empty corpus");
    if (heldout.sentences.size() != heldout.true_spans.size())
        throw std::invalid_argument("train_sbr: held-out sentences and truth are misaligned");
    {
        bool any_positive = false;
        for (const auto& s : train_sentences) {
            if (!label_spans(s, lexicon).positives.empty()) { any_positive = true; break; }
        }
        if (!any_positive)
            throw std::invalid_argument("train_sbr: lexicon labels no positive span in the corpus");
    }

    const std::size_t d = enc_cfg.embed_dim;
    TrainResult result{std::move(encoder), std::move(classifier), std::move(lexicon), {}};
    Rng rng(tc.seed);

    std::vector<std::size_t> order(train_sentences.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::u32string> staged;  // promotions waiting for the next epoch

    for (int epoch = 1; epoch <= tc.iterations; ++epoch) {
        result.lexicon.commit_promotions(staged, epoch - 1);
        staged.clear();

        rng.shuffle(order);

        EpochMetrics metrics;
        metrics.epoch = epoch;
        double loss_sum = 0.0;
        std::size_t batches = 0;

        // The promotion counter ticks once per epoch per surface string:
        // positive only if every occurrence this epoch was predicted positive.
        std::map<std::u32string, bool> epoch_outcome;

        for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
            const std::size_t stop = std::min(order.size(), start + tc.batch_size);

            std::vector<const Sentence*> batch;
            std::vector<Matrix> h;
            std::vector<SpanRef> pos_refs, unl_refs;
            std::vector<double> pos_probs, unl_probs;
            for (std::size_t b = start; b < stop; ++b) {
                const Sentence& sent = train_sentences[order[b]];
                const std::size_t local = batch.size();
                batch.push_back(&sent);
                h.push_back(encode(enc_cfg, result.encoder, sent));
                const SpanLabeling lab = label_spans(sent, result.lexicon);
                for (const auto& span : lab.positives) {
                    pos_refs.push_back({local, span});
                    pos_probs.push_back(classify_span(h[local].row(span.first),
                                                      h[local].row(span.second), d,
                                                      result.classifier));
                }
                for (const auto& span : lab.unlabeled) {
                    unl_refs.push_back({local, span});
                    const double p = classify_span(h[local].row(span.first),
                                                   h[local].row(span.second), d,
                                                   result.classifier);
                    unl_probs.push_back(p);
                    const bool positive = p >= tc.decision_threshold;
                    auto gram = sent.chars.substr(span.first, span.second - span.first + 1);
                    auto [it, fresh] = epoch_outcome.emplace(std::move(gram), positive);
                    if (!fresh && !positive) it->second = false;
                }
            }
            if (pos_probs.empty() && unl_probs.empty()) continue;  // degenerate batch, no spans

            std::vector<double> d_pos, d_unl;
            const double loss = pu_loss_grad(pos_probs, unl_probs, pu, d_pos, d_unl);
            if (std::isnan(loss))
                throw std::runtime_error("train_sbr: NaN loss at epoch " + std::to_string(epoch) +
                                         " (learning rate too high?)");
            loss_sum += loss;
            ++batches;

            // Backward: dL/dz fans out to W, b, and the two span endpoints.
            std::vector<Matrix> upstream;
            upstream.reserve(batch.size());
            for (const auto& m : h) upstream.emplace_back(m.rows, m.cols);
            std::vector<double> grad_w(2 * d, 0.0);
            double grad_b = 0.0;
            auto backprop_span = [&](const SpanRef& ref, double p, double dldp) {
                if (dldp == 0.0) return;
                const double dz = dldp * p * (1.0 - p);
                const double* hi = h[ref.sentence].row(ref.span.first);
                const double* hj = h[ref.sentence].row(ref.span.second);
                double* ui = upstream[ref.sentence].row(ref.span.first);
                double* uj = upstream[ref.sentence].row(ref.span.second);
                for (std::size_t k = 0; k < d; ++k) {
                    grad_w[k] += dz * hi[k];
                    grad_w[d + k] += dz * hj[k];
                    ui[k] += dz * result.classifier.w[k];
                    uj[k] += dz * result.classifier.w[d + k];
                }
                grad_b += dz;
            };
            for (std::size_t i = 0; i < pos_refs.size(); ++i)
                backprop_span(pos_refs[i], pos_probs[i], d_pos[i]);
            for (std::size_t i = 0; i < unl_refs.size(); ++i)
                backprop_span(unl_refs[i], unl_probs[i], d_unl[i]);

            EncoderGrad total;
            total.embedding = Matrix(enc_cfg.rows(), d);
            total.mix.assign(result.encoder.mix.size(), 0.0);
            for (std::size_t b = 0; b < batch.size(); ++b) {
                const EncoderGrad g = encoder_backward(enc_cfg, result.encoder, *batch[b],
                                                       upstream[b]);
                for (std::size_t k = 0; k < total.embedding.data.size(); ++k)
                    total.embedding.data[k] += g.embedding.data[k];
                for (std::size_t k = 0; k < total.mix.size(); ++k) total.mix[k] += g.mix[k];
            }

            const double lr = tc.learning_rate;
            for (std::size_t k = 0; k < grad_w.size(); ++k) result.classifier.w[k] -= lr * grad_w[k];
            result.classifier.b -= lr * grad_b;
            for (std::size_t k = 0; k < total.embedding.data.size(); ++k)
                result.encoder.embedding.data[k] -= lr * total.embedding.data[k];
            for (std::size_t k = 0; k < total.mix.size(); ++k)
                result.encoder.mix[k] -= lr * total.mix[k];
        }

        auto earned = result.lexicon.record_epoch_outcomes(epoch_outcome);
        metrics.promoted = earned.size();
        staged.insert(staged.end(), std::make_move_iterator(earned.begin()),
                      std::make_move_iterator(earned.end()));

        metrics.loss = batches ? loss_sum / static_cast<double>(batches) : 0.0;
        eval_heldout(heldout, enc_cfg, result.encoder, result.classifier, tc.decision_threshold,
                     metrics);
        result.log.push_back(metrics);
    }
    result.lexicon.commit_promotions(staged, tc.iterations);
    return result;
}

std::vector<Span> predict_boundaries(const EncoderConfig& enc_cfg, const EncoderParams& encoder,
                                     const ClassifierParams& classifier, const Sentence& s,
                                     double threshold) {
    std::vector<Span> out;
    if (s.chars.empty()) return out;
    const Matrix h = encode(enc_cfg, encoder, s);
    for (const auto& span : enumerate_spans(s.chars.size())) {
        const double p =
            classify_span(h.row(span.first), h.row(span.second), enc_cfg.embed_dim, classifier);
        if (p >= threshold) out.push_back(span);
    }
    return out;
}

std::string format_metrics_line(const EpochMetrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%zu\t%.6f\t%.6f\t%.6f", m.epoch, m.loss, m.promoted,
                  m.heldout_precision, m.heldout_recall, m.heldout_f1);
    return buf;
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::ifstream& in) {
    const std::uint64_t lo = get_u32(in);
    const std::uint64_t hi = get_u32(in);
    return lo | (hi << 32);
}

double get_f64(std::ifstream& in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

constexpr char kMagic[4] = {'S', 'B', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_model(const SbrModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(model.enc_cfg.embed_dim));
    put_u32(out, static_cast<std::uint32_t>(model.enc_cfg.window));
    put_u64(out, model.enc_cfg.seed);
    put_u32(out, static_cast<std::uint32_t>(model.enc_cfg.vocab.size()));
    std::vector<char32_t> by_row(model.enc_cfg.vocab.size());
    for (const auto& [c, row] : model.enc_cfg.vocab) by_row[row] = c;
    for (char32_t c : by_row) put_u32(out, static_cast<std::uint32_t>(c));
    for (double v : model.enc_params.mix) put_f64(out, v);
    for (double v : model.enc_params.embedding.data) put_f64(out, v);
    for (double v : model.classifier.w) put_f64(out, v);
    put_f64(out, model.classifier.b);
    if (!out) throw std::runtime_error("I/O error writing " + path);
}

SbrModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a model file");
    if (get_u32(in) != kVersion) throw std::runtime_error(path + ": unsupported model version");

    SbrModel model;
    model.enc_cfg.embed_dim = get_u32(in);
    model.enc_cfg.window = get_u32(in);
    model.enc_cfg.seed = get_u64(in);
    const std::uint32_t nchars = get_u32(in);
    for (std::uint32_t i = 0; i < nchars; ++i)
        model.enc_cfg.vocab.emplace(static_cast<char32_t>(get_u32(in)), i);
    model.enc_params.mix.resize(2 * model.enc_cfg.window + 1);
    for (double& v : model.enc_params.mix) v = get_f64(in);
    model.enc_params.embedding = Matrix(model.enc_cfg.rows(), model.enc_cfg.embed_dim);
    for (double& v : model.enc_params.embedding.data) v = get_f64(in);
    model.classifier.w.resize(2 * model.enc_cfg.embed_dim);
    for (double& v : model.classifier.w) v = get_f64(in);
    model.classifier.b = get_f64(in);
    if (!in) throw std::runtime_error(path + ": truncated model file");
    return model;
}

}  // namespace seglearn
