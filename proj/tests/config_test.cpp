#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seglearn/config.hpp"
#include "seglearn/rng.hpp"
#include "test_util.hpp"

using namespace seglearn;

TEST_CASE("defaults survive an empty config") {
    const auto cfg = parse_config_text("");
    CHECK(cfg.embed_dim == 32);
    CHECK(cfg.window == 2);
    CHECK(cfg.pi_p == 0.2);
    CHECK(cfg.gamma == 0.5);
    CHECK(cfg.iterations == 30);
    CHECK(cfg.batch_size == 64);
    CHECK(cfg.learning_rate == 0.05);
    CHECK(cfg.decision_threshold == 0.5);
    CHECK(cfg.keep_ratio == 0.9);
    CHECK(cfg.max_ngram_len == 4);
    CHECK(cfg.bim_distance == 2);
    CHECK(cfg.k_threshold == 5);
}

TEST_CASE("parsing, comments and whitespace") {
    const auto cfg = parse_config_text(
        "# run settings\n"
        "corpus = data/corpus.txt\n"
        "seed_lexicon=data/lex.txt\n"
        "\n"
        "pi_p = 0.3\n"
        "iterations = 12\n"
        "seed=7\n");
    CHECK(cfg.corpus == "data/corpus.txt");
    CHECK(cfg.seed_lexicon == "data/lex.txt");
    CHECK(cfg.pi_p == 0.3);
    CHECK(cfg.iterations == 12);
    CHECK(cfg.seed == 7);
}

TEST_CASE("load(dump(cfg)) reproduces every effective value") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        RunConfig cfg;
        cfg.corpus = "c" + std::to_string(trial) + ".txt";
        cfg.seed_lexicon = "lex.txt";
        cfg.out_dir = "out";
        cfg.gold = trial % 2 ? "gold.txt" : "";
        cfg.embed_dim = 2 + rng.below(60);
        cfg.window = rng.below(4);
        cfg.pi_p = rng.uniform(0.01, 0.99);
        cfg.gamma = rng.uniform(0.05, 2.0);
        cfg.iterations = 1 + static_cast<int>(rng.below(40));
        cfg.batch_size = 1 + static_cast<int>(rng.below(200));
        cfg.learning_rate = rng.uniform(1e-4, 0.3);
        cfg.decision_threshold = rng.uniform(0.05, 0.95);
        cfg.heldout_ratio = rng.uniform(0.0, 0.4);
        cfg.k_threshold = 1 + static_cast<int>(rng.below(9));
        cfg.keep_ratio = rng.uniform(0.1, 1.0);
        cfg.max_ngram_len = 1 + static_cast<int>(rng.below(5));
        cfg.bim_distance = 1 + static_cast<int>(rng.below(4));
        cfg.seed = rng.raw();

        const auto back = parse_config_text(dump_config(cfg));
        CHECK(back.corpus == cfg.corpus);
        CHECK(back.seed_lexicon == cfg.seed_lexicon);
        CHECK(back.out_dir == cfg.out_dir);
        CHECK(back.gold == cfg.gold);
        CHECK(back.embed_dim == cfg.embed_dim);
        CHECK(back.window == cfg.window);
        CHECK(back.pi_p == cfg.pi_p);
        CHECK(back.gamma == cfg.gamma);
        CHECK(back.iterations == cfg.iterations);
        CHECK(back.batch_size == cfg.batch_size);
        CHECK(back.learning_rate == cfg.learning_rate);
        CHECK(back.decision_threshold == cfg.decision_threshold);
        CHECK(back.heldout_ratio == cfg.heldout_ratio);
        CHECK(back.k_threshold == cfg.k_threshold);
        CHECK(back.keep_ratio == cfg.keep_ratio);
        CHECK(back.max_ngram_len == cfg.max_ngram_len);
        CHECK(back.bim_distance == cfg.bim_distance);
        CHECK(back.seed == cfg.seed);
    }
}

TEST_CASE("unknown keys and malformed lines are config errors") {
    CHECK_THROWS_AS(parse_config_text("no_such_key=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("corpus\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("iterations=abc\n"), ConfigError);
}

TEST_CASE("range violations are config errors") {
    CHECK_THROWS_AS(parse_config_text("pi_p=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("pi_p=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("gamma=-1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("iterations=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("keep_ratio=1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("keep_ratio=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("decision_threshold=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("embed_dim=1\n"), ConfigError);
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_config("/nonexistent/cfg"), ConfigError);
}

TEST_CASE("config file on disk") {
    testutil::TempDir tmp("cfg");
    const auto path = tmp.file("run.cfg");
    testutil::write_file(path, "corpus=a.txt\nseed=12\n");
    const auto cfg = load_config(path);
    CHECK(cfg.corpus == "a.txt");
    CHECK(cfg.seed == 12);
}
