#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace seglearn {

// Usage or configuration problem; maps to exit code 2 at the CLI boundary.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat pipeline configuration. One seed feeds every random draw.
struct RunConfig {
    // paths
    std::string corpus;
    std::string seed_lexicon;
    std::string out_dir = ".";
    std::string gold;  // optional gold segmentation, used for held-out truth

    // encoder
    std::size_t embed_dim = 32;
    std::size_t window = 2;

    // PU learning
    double pi_p = 0.2;
    double gamma = 0.5;

    // training
    int iterations = 30;
    int batch_size = 64;
    double learning_rate = 0.05;
    double decision_threshold = 0.5;
    double heldout_ratio = 0.1;
    int k_threshold = 5;

    // preprocessing / evaluation
    double keep_ratio = 0.9;
    int max_ngram_len = 4;
    int bim_distance = 2;

    std::uint64_t seed = 0;
};

// `key=value` lines; blank lines and '#' comments are ignored. Unknown keys
// and out-of-range values raise ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

// Every effective field, one per line, stable order. parse(dump(c)) == c.
std::string dump_config(const RunConfig& cfg);

// Range checks shared by the loader and the CLI flag overrides.
void validate_config(const RunConfig& cfg);

}  // namespace seglearn
