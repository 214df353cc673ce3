#include "seglearn/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <unordered_set>
#include <set>

#include "seglearn/bim.hpp"
#include "seglearn/charlm.hpp"
#include "seglearn/corpus.hpp"
#include "seglearn/encoder.hpp"
#include "seglearn/lexicon.hpp"
#include "seglearn/sbr.hpp"
#include "seglearn/utf8.hpp"

namespace seglearn {

namespace {

void require_file(const std::string& path, const char* what) {
    if (!std::filesystem::exists(path))
        throw ConfigError(std::string(what) + " not found: " + path);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

int cmd_build_ngrams(const std::string& corpus_path, const std::string& out_path, int max_len) {
    require_file(corpus_path, "corpus");
    const auto sentences = read_corpus(corpus_path);
    if (sentences.empty()) throw std::runtime_error("corpus is empty: " + corpus_path);
    const auto counts = count_ngrams(sentences, max_len);
    write_dictionary(compute_measures(counts), out_path);
    return 0;
}

int cmd_filter_lexicon(const std::string& raw_path, const std::string& out_path) {
    require_file(raw_path, "raw word list");
    std::ifstream in(raw_path, std::ios::binary);
    std::set<std::u32string> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tab = line.find('\t');
        if (tab != std::string::npos) line.resize(tab);
        if (line.empty()) continue;
        raw.insert(utf8_decode(line));
    }
    write_lexicon(filter_rules(raw), out_path);
    return 0;
}

int cmd_filter_corpus(const std::string& corpus_path, const std::string& out_path,
                      double keep_ratio) {
    require_file(corpus_path, "corpus");
    if (!(keep_ratio > 0.0 && keep_ratio <= 1.0))
        throw ConfigError("keep_ratio must be in (0, 1]");
    const auto unique = deduplicate(read_corpus(corpus_path));
    NgramCharLm lm;
    lm.train(unique);
    const auto kept = filter_corpus(unique, lm, U"", keep_ratio);
    auto out = open_out(out_path);
    for (const auto& s : kept) out << utf8_encode(s.chars) << '\n';
    return 0;
}

namespace {

// Span truth is type-level wordhood: a span is positive when its substring is
// used as a word anywhere in the gold annotation. This covers nested words
// (a compound's inner word counts even where the gold token is the compound),
// which is exactly what the span classifier is trained to recognize.
std::set<Span> gold_spans(const Sentence& s,
                          const std::unordered_set<std::u32string>& gold_types) {
    std::set<Span> spans;
    for (const auto& span : enumerate_spans(s.chars.size())) {
        if (gold_types.count(s.chars.substr(span.first, span.second - span.first + 1)))
            spans.insert(span);
    }
    return spans;
}

}  // namespace

int cmd_train_sbr(const RunConfig& cfg) {
    require_file(cfg.corpus, "corpus");
    require_file(cfg.seed_lexicon, "seed lexicon");
    if (!cfg.gold.empty()) require_file(cfg.gold, "gold segmentation");
    std::filesystem::create_directories(cfg.out_dir);

    const auto corpus = read_corpus(cfg.corpus);
    if (corpus.empty()) throw std::runtime_error("corpus is empty: " + cfg.corpus);
    Lexicon lexicon = read_lexicon(cfg.seed_lexicon, cfg.k_threshold);

    const std::size_t n_heldout = ceil_fraction(cfg.heldout_ratio, corpus.size());
    const std::size_t n_train = corpus.size() - n_heldout;
    std::vector<Sentence> train_sentences(corpus.begin(), corpus.begin() + n_train);

    HeldoutSet heldout;
    heldout.sentences.assign(corpus.begin() + n_train, corpus.end());
    if (!cfg.gold.empty()) {
        const auto segs = read_segmented(cfg.gold);
        if (segs.size() != corpus.size())
            throw std::runtime_error("gold segmentation has " + std::to_string(segs.size()) +
                                     " sentences, corpus has " + std::to_string(corpus.size()));
        std::unordered_set<std::u32string> gold_types;
        for (const auto& seg : segs)
            for (const auto& w : seg.words)
                if (w.size() >= 2 && w.size() <= 4) gold_types.insert(w);
        for (std::size_t t = 0; t < n_heldout; ++t) {
            const auto& seg = segs[n_train + t];
            if (seg.char_count() != heldout.sentences[t].chars.size())
                throw std::runtime_error("gold segmentation does not match corpus at sentence " +
                                         std::to_string(n_train + t));
            heldout.true_spans.push_back(gold_spans(heldout.sentences[t], gold_types));
        }
    } else {
        for (const auto& s : heldout.sentences) {
            const auto lab = label_spans(s, lexicon);
            heldout.true_spans.emplace_back(lab.positives.begin(), lab.positives.end());
        }
    }

    const EncoderConfig enc_cfg = make_encoder_config(corpus, cfg.embed_dim, cfg.window, cfg.seed);
    const EncoderParams enc_init = init_encoder(enc_cfg);
    const ClassifierParams cls_init = zero_classifier(cfg.embed_dim);
    const PUConfig pu{cfg.pi_p, cfg.gamma};
    TrainConfig tc;
    tc.iterations = cfg.iterations;
    tc.batch_size = cfg.batch_size;
    tc.learning_rate = cfg.learning_rate;
    tc.seed = cfg.seed;
    tc.decision_threshold = cfg.decision_threshold;

    TrainResult result = train_sbr(train_sentences, heldout, enc_cfg, enc_init, cls_init,
                                   std::move(lexicon), pu, tc);

    save_model({enc_cfg, result.encoder, result.classifier}, cfg.out_dir + "/model.bin");
    write_lexicon(result.lexicon, cfg.out_dir + "/lexicon.txt");
    auto metrics = open_out(cfg.out_dir + "/metrics.tsv");
    for (const auto& m : result.log) metrics << format_metrics_line(m) << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& corpus_path,
                const std::string& out_path, double threshold) {
    require_file(model_path, "model");
    require_file(corpus_path, "corpus");
    const SbrModel model = load_model(model_path);
    const auto corpus = read_corpus(corpus_path);
    auto out = open_out(out_path);
    for (const auto& s : corpus) {
        const auto spans =
            predict_boundaries(model.enc_cfg, model.enc_params, model.classifier, s, threshold);
        for (std::size_t k = 0; k < spans.size(); ++k) {
            if (k) out << ' ';
            out << spans[k].first << ',' << spans[k].second;
        }
        out << '\n';
    }
    return 0;
}

int cmd_eval_bim(const std::string& dump_path, const std::string& segmented_path, int distance,
                 bool strict, bool tsv, std::ostream& report_out) {
    require_file(dump_path, "embedding dump");
    require_file(segmented_path, "segmented corpus");
    if (distance < 1) throw ConfigError("distance threshold must be >= 1");
    const auto blocks = read_embedding_dump(dump_path);
    const auto segs = read_segmented(segmented_path);
    if (blocks.size() != segs.size())
        throw std::runtime_error("embedding dump has " + std::to_string(blocks.size()) +
                                 " blocks, segmented corpus has " + std::to_string(segs.size()) +
                                 " sentences");
    std::vector<Matrix> embeddings;
    embeddings.reserve(blocks.size());
    for (const auto& [sid, m] : blocks) embeddings.push_back(m);
    const BimReport r = compute_bim(embeddings, segs, static_cast<std::size_t>(distance), strict);
    report_out << format_bim_report(r, tsv) << '\n';
    return 0;
}

int cmd_gen_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_synthetic(gen_synthetic(spec), out_dir);
    return 0;
}

int cmd_dump_embeddings(const std::string& model_path, const std::string& corpus_path,
                        const std::string& out_path) {
    require_file(model_path, "model");
    require_file(corpus_path, "corpus");
    const SbrModel model = load_model(model_path);
    const auto corpus = read_corpus(corpus_path);
    auto out = open_out(out_path);
    for (const auto& s : corpus)
        write_embedding_block(out, s.id, encode(model.enc_cfg, model.enc_params, s));
    return 0;
}

}  // namespace seglearn
