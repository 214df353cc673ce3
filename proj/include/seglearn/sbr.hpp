#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "seglearn/encoder.hpp"
#include "seglearn/lexicon.hpp"

namespace seglearn {

struct ClassifierParams {
    std::vector<double> w;  // length 2 * embed_dim, applied to [h_i; h_j]
    double b = 0.0;
};

ClassifierParams zero_classifier(std::size_t embed_dim);

struct PUConfig {
    double pi_p = 0.2;   // assumed positive rate inside the unlabeled pool
    double gamma = 0.5;  // weight of the labeled-positive term
};

struct TrainConfig {
    int iterations = 30;
    int batch_size = 64;  // sentences per optimizer step
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
    double decision_threshold = 0.5;
};

// sigmoid(w . [h_i; h_j] + b)
double classify_span(const double* h_i, const double* h_j, std::size_t embed_dim,
                     const ClassifierParams& params);

// Non-negative PU risk:
//   gamma * pi_p * mean(-ln p | positives)
//   + max{0, mean(-ln(1-p) | unlabeled) - pi_p * mean(-ln(1-p) | positives)}
// Empty-list means are 0; both lists empty is an error. Probabilities are
// clipped to [1e-7, 1-1e-7] before the logs.
double pu_loss(const std::vector<double>& pos_probs, const std::vector<double>& unl_probs,
               const PUConfig& cfg);

// Same risk plus d(loss)/d(prob) for every entry. When the max clamps to 0
// the clamped term contributes no gradient.
double pu_loss_grad(const std::vector<double>& pos_probs, const std::vector<double>& unl_probs,
                    const PUConfig& cfg, std::vector<double>& d_pos, std::vector<double>& d_unl);

struct EpochMetrics {
    int epoch = 0;           // 1-based
    double loss = 0.0;       // mean batch PU loss
    std::size_t promoted = 0;  // words earning promotion during this epoch
    double heldout_precision = 0.0;
    double heldout_recall = 0.0;
    double heldout_f1 = 0.0;
};

// Held-out sentences with their true word spans (lengths 2-4 only).
struct HeldoutSet {
    std::vector<Sentence> sentences;
    std::vector<std::set<Span>> true_spans;  // aligned with sentences
};

struct TrainResult {
    EncoderParams encoder;
    ClassifierParams classifier;
    Lexicon lexicon;
    std::vector<EpochMetrics> log;
};

// Joint gradient-descent training of encoder and classifier under the PU
// risk. Per epoch: seeded shuffle, batched updates, threshold predictions fed
// to the promotion counters; staged words enter the lexicon at the next epoch
// boundary. Deterministic for a fixed seed.
TrainResult train_sbr(const std::vector<Sentence>& train_sentences, const HeldoutSet& heldout,
                      const EncoderConfig& enc_cfg, EncoderParams encoder,
                      ClassifierParams classifier, Lexicon lexicon, const PUConfig& pu,
                      const TrainConfig& tc);

// Spans whose classifier probability reaches the threshold.
std::vector<Span> predict_boundaries(const EncoderConfig& enc_cfg, const EncoderParams& encoder,
                                     const ClassifierParams& classifier, const Sentence& s,
                                     double threshold);

std::string format_metrics_line(const EpochMetrics& m);

struct SbrModel {
    EncoderConfig enc_cfg;
    EncoderParams enc_params;
    ClassifierParams classifier;
};

// Versioned little-endian binary layout; see README for the field order.
void save_model(const SbrModel& model, const std::string& path);
SbrModel load_model(const std::string& path);

}  // namespace seglearn
