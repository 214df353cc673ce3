#pragma once

#include <iosfwd>
#include <string>

#include "seglearn/config.hpp"
#include "seglearn/synthetic.hpp"

namespace seglearn {

// Subcommand bodies. Each validates its inputs, runs the pipeline stages and
// returns 0; failures surface as exceptions (ConfigError for usage problems,
// std::runtime_error otherwise) that the CLI maps to exit codes 2 and 1.

int cmd_build_ngrams(const std::string& corpus_path, const std::string& out_path, int max_len);

int cmd_filter_lexicon(const std::string& raw_path, const std::string& out_path);

int cmd_filter_corpus(const std::string& corpus_path, const std::string& out_path,
                      double keep_ratio);

// Full training run; writes model.bin, lexicon.txt and metrics.tsv to
// cfg.out_dir. Held-out truth comes from cfg.gold when set, otherwise from
// seed-lexicon labeling.
int cmd_train_sbr(const RunConfig& cfg);

int cmd_predict(const std::string& model_path, const std::string& corpus_path,
                const std::string& out_path, double threshold);

int cmd_eval_bim(const std::string& dump_path, const std::string& segmented_path, int distance,
                 bool strict, bool tsv, std::ostream& report_out);

int cmd_gen_synthetic(const SyntheticSpec& spec, const std::string& out_dir);

int cmd_dump_embeddings(const std::string& model_path, const std::string& corpus_path,
                        const std::string& out_path);

}  // namespace seglearn
