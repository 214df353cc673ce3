#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seglearn/commands.hpp"

namespace {

using seglearn::RunConfig;

struct TrainArgs {
    std::string config_path;
    std::optional<std::string> corpus, seed_lexicon, gold, out_dir;
    std::optional<std::size_t> embed_dim, window;
    std::optional<double> pi_p, gamma, learning_rate, decision_threshold, heldout_ratio;
    std::optional<int> iterations, batch_size, k_threshold;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve_train_config(const TrainArgs& a) {
    RunConfig cfg;
    if (!a.config_path.empty()) cfg = seglearn::load_config(a.config_path);
    if (a.corpus) cfg.corpus = *a.corpus;
    if (a.seed_lexicon) cfg.seed_lexicon = *a.seed_lexicon;
    if (a.gold) cfg.gold = *a.gold;
    if (a.out_dir) cfg.out_dir = *a.out_dir;
    if (a.embed_dim) cfg.embed_dim = *a.embed_dim;
    if (a.window) cfg.window = *a.window;
    if (a.pi_p) cfg.pi_p = *a.pi_p;
    if (a.gamma) cfg.gamma = *a.gamma;
    if (a.iterations) cfg.iterations = *a.iterations;
    if (a.batch_size) cfg.batch_size = *a.batch_size;
    if (a.k_threshold) cfg.k_threshold = *a.k_threshold;
    if (a.learning_rate) cfg.learning_rate = *a.learning_rate;
    if (a.decision_threshold) cfg.decision_threshold = *a.decision_threshold;
    if (a.heldout_ratio) cfg.heldout_ratio = *a.heldout_ratio;
    if (a.seed) cfg.seed = *a.seed;
    seglearn::validate_config(cfg);
    if (cfg.corpus.empty()) throw seglearn::ConfigError("train-sbr: no corpus configured");
    if (cfg.seed_lexicon.empty())
        throw seglearn::ConfigError("train-sbr: no seed lexicon configured");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seglearn - word-boundary learning toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // build-ngrams
    {
        auto* sub = app.add_subcommand("build-ngrams",
                                       "Build the statistical n-gram boundary dictionary");
        auto corpus = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto max_len = std::make_shared<int>(4);
        sub->add_option("--corpus", *corpus, "UTF-8 corpus, one sentence per line")->required();
        sub->add_option("--out", *out, "dictionary output path")->required();
        sub->add_option("--max-ngram-len", *max_len, "longest gram to count");
        sub->callback([=, &rc] { rc = seglearn::cmd_build_ngrams(*corpus, *out, *max_len); });
    }
    // filter-lexicon
    {
        auto* sub = app.add_subcommand("filter-lexicon", "Rule-filter a raw word list");
        auto raw = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sub->add_option("--raw", *raw, "raw word list, one word per line")->required();
        sub->add_option("--out", *out, "lexicon output path")->required();
        sub->callback([=, &rc] { rc = seglearn::cmd_filter_lexicon(*raw, *out); });
    }
    // filter-corpus
    {
        auto* sub = app.add_subcommand("filter-corpus",
                                       "Drop the lowest-scoring sentences under the char LM");
        auto corpus = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto keep = std::make_shared<double>(0.9);
        sub->add_option("--corpus", *corpus)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("--keep-ratio", *keep, "fraction of sentences to keep");
        sub->callback([=, &rc] { rc = seglearn::cmd_filter_corpus(*corpus, *out, *keep); });
    }
    // train-sbr
    {
        auto* sub = app.add_subcommand("train-sbr", "Train the span boundary classifier");
        auto a = std::make_shared<TrainArgs>();
        sub->add_option("--config", a->config_path, "key=value config file");
        sub->add_option("--corpus", a->corpus);
        sub->add_option("--seed-lexicon", a->seed_lexicon);
        sub->add_option("--gold", a->gold, "gold segmentation for held-out truth");
        sub->add_option("--out-dir", a->out_dir);
        sub->add_option("--embed-dim", a->embed_dim);
        sub->add_option("--window", a->window);
        sub->add_option("--pi-p", a->pi_p);
        sub->add_option("--gamma", a->gamma);
        sub->add_option("--iterations", a->iterations);
        sub->add_option("--batch-size", a->batch_size);
        sub->add_option("--k-threshold", a->k_threshold);
        sub->add_option("--learning-rate", a->learning_rate);
        sub->add_option("--decision-threshold", a->decision_threshold);
        sub->add_option("--heldout-ratio", a->heldout_ratio);
        sub->add_option("--seed", a->seed);
        sub->callback([=, &rc] { rc = seglearn::cmd_train_sbr(resolve_train_config(*a)); });
    }
    // predict
    {
        auto* sub = app.add_subcommand("predict", "Write predicted word spans per sentence");
        auto model = std::make_shared<std::string>();
        auto corpus = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto threshold = std::make_shared<double>(0.5);
        sub->add_option("--model", *model)->required();
        sub->add_option("--corpus", *corpus)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("--threshold", *threshold, "decision threshold");
        sub->callback([=, &rc] { rc = seglearn::cmd_predict(*model, *corpus, *out, *threshold); });
    }
    // eval-bim
    {
        auto* sub = app.add_subcommand("eval-bim", "Boundary information metric of an embedding dump");
        auto dump = std::make_shared<std::string>();
        auto segmented = std::make_shared<std::string>();
        auto distance = std::make_shared<int>(2);
        auto strict = std::make_shared<bool>(false);
        auto tsv = std::make_shared<bool>(false);
        sub->add_option("--embeddings", *dump, "embedding dump file")->required();
        sub->add_option("--segmented", *segmented, "gold-segmented corpus")->required();
        sub->add_option("--distance", *distance, "negative-pair distance threshold L");
        sub->add_flag("--strict-distance", *strict, "use DIS < L instead of DIS <= L");
        sub->add_flag("--tsv", *tsv, "machine-readable tab-separated output");
        sub->callback([=, &rc] {
            rc = seglearn::cmd_eval_bim(*dump, *segmented, *distance, *strict, *tsv, std::cout);
        });
    }
    // gen-synthetic
    {
        auto* sub = app.add_subcommand("gen-synthetic",
                                       "Generate the synthetic vocabulary/corpus/gold benchmark");
        auto spec = std::make_shared<seglearn::SyntheticSpec>();
        auto out_dir = std::make_shared<std::string>();
        sub->add_option("--out-dir", *out_dir)->required();
        sub->add_option("--seed", spec->seed);
        sub->add_option("--alphabet-size", spec->alphabet_size);
        sub->add_option("--words2", spec->len2_words, "number of 2-character words");
        sub->add_option("--words3", spec->len3_words, "number of 3-character words");
        sub->add_option("--words4", spec->len4_words, "number of 4-character words");
        sub->add_option("--sentences", spec->num_sentences);
        sub->add_option("--min-words", spec->min_words_per_sentence);
        sub->add_option("--max-words", spec->max_words_per_sentence);
        sub->add_option("--seed-ratio", spec->seed_lexicon_ratio,
                        "fraction of the vocabulary in the seed lexicon");
        sub->callback([=, &rc] { rc = seglearn::cmd_gen_synthetic(*spec, *out_dir); });
    }
    // dump-embeddings
    {
        auto* sub = app.add_subcommand("dump-embeddings",
                                       "Encode a corpus with a trained model and dump h vectors");
        auto model = std::make_shared<std::string>();
        auto corpus = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sub->add_option("--model", *model)->required();
        sub->add_option("--corpus", *corpus)->required();
        sub->add_option("--out", *out)->required();
        sub->callback([=, &rc] { rc = seglearn::cmd_dump_embeddings(*model, *corpus, *out); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    } catch (const seglearn::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
