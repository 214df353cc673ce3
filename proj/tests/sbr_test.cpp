#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "seglearn/rng.hpp"
#include "seglearn/sbr.hpp"
#include "test_util.hpp"

using namespace seglearn;

namespace {

std::vector<Sentence> make_corpus(const std::vector<std::u32string>& lines) {
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < lines.size(); ++i) out.push_back({i, lines[i]});
    return out;
}

}  // namespace

TEST_CASE("zero weights score one half") {
    const double h[2] = {0.3, -0.9};
    CHECK(classify_span(h, h, 2, zero_classifier(2)) == 0.5);
}

TEST_CASE("hand-evaluated span score") {
    const double hi[2] = {1.0, 0.0};
    const double hj[2] = {0.0, 1.0};
    ClassifierParams params{{2.0, 0.0, 0.0, 2.0}, -1.0};
    // z = 2*1 + 2*1 - 1 = 3
    CHECK(classify_span(hi, hj, 2, params) == doctest::Approx(0.9525741268224334).epsilon(1e-12));
}

TEST_CASE("score is strictly increasing in the bias") {
    Rng rng(3);
    const double hi[3] = {0.2, -0.4, 0.8};
    const double hj[3] = {-0.1, 0.5, 0.3};
    ClassifierParams params{{0.3, -0.2, 1.0, 0.4, 0.0, -0.7}, 0.0};
    double prev = -1.0;
    for (double b = -4.0; b <= 4.0; b += 0.25) {
        params.b = b;
        const double p = classify_span(hi, hj, 3, params);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("dimension mismatch is fatal") {
    const double h[2] = {0.0, 0.0};
    CHECK_THROWS_AS(classify_span(h, h, 3, zero_classifier(2)), std::logic_error);
}

TEST_CASE("pu loss: one positive at 0.5, clamp active") {
    const double loss = pu_loss({0.5}, {}, {0.2, 0.5});
    CHECK(loss == doctest::Approx(0.069315).epsilon(1e-6));
    CHECK(loss == doctest::Approx(0.5 * 0.2 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("pu loss: one unlabeled at 0.5") {
    const double loss = pu_loss({}, {0.5}, {0.2, 0.5});
    CHECK(loss == doctest::Approx(0.693147).epsilon(1e-6));
}

TEST_CASE("pu loss: clamp zeroes the corrected term") {
    const double loss = pu_loss({0.9}, {}, {0.2, 0.5});
    CHECK(loss == doctest::Approx(0.010536).epsilon(1e-6));
}

TEST_CASE("pu loss rejects a fully empty batch") {
    CHECK_THROWS_AS(pu_loss({}, {}, {0.2, 0.5}), std::invalid_argument);
}

TEST_CASE("pu loss is non-negative and reduces to the naive risk at pi_p = 0") {
    Rng rng(17);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> pos(rng.below(6)), unl(rng.below(6));
        if (pos.empty() && unl.empty()) unl.push_back(0.5);
        for (auto& p : pos) p = rng.uniform(0.001, 0.999);
        for (auto& p : unl) p = rng.uniform(0.001, 0.999);
        PUConfig cfg{rng.uniform(0.01, 0.99), rng.uniform(0.05, 3.0)};

        const double loss = pu_loss(pos, unl, cfg);
        CHECK(loss >= 0.0);

        const double naive = pu_loss(pos, unl, {0.0, cfg.gamma});
        double expect = 0.0;
        for (double p : unl) expect -= std::log(1.0 - p);
        if (!unl.empty()) expect /= static_cast<double>(unl.size());
        CHECK(naive == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("pu risk tracks the supervised risk on mixture batches") {
    // unlabeled pool truly positive at rate pi_p; positives and negatives get
    // scores from two fixed distributions
    const PUConfig cfg{0.2, 0.5};
    Rng rng(23);
    double total_rel = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        std::vector<double> labeled_pos, unlabeled;
        std::vector<int> truth;
        for (int i = 0; i < 2000; ++i) labeled_pos.push_back(rng.uniform(0.55, 0.95));
        for (int i = 0; i < 10000; ++i) {
            const bool is_pos = rng.uniform01() < cfg.pi_p;
            truth.push_back(is_pos);
            unlabeled.push_back(is_pos ? rng.uniform(0.55, 0.95) : rng.uniform(0.05, 0.45));
        }
        const double pu = pu_loss(labeled_pos, unlabeled, cfg);

        // supervised oracle: gamma*pi_p*L+ over true positives plus
        // (1-pi_p)*L- over true negatives
        double lp = 0.0, ln_ = 0.0;
        std::size_t np = 0, nn = 0;
        for (std::size_t i = 0; i < unlabeled.size(); ++i) {
            if (truth[i]) { lp -= std::log(unlabeled[i]); ++np; }
            else { ln_ -= std::log(1.0 - unlabeled[i]); ++nn; }
        }
        lp /= static_cast<double>(np);
        ln_ /= static_cast<double>(nn);
        const double supervised = cfg.gamma * cfg.pi_p * lp + (1.0 - cfg.pi_p) * ln_;
        total_rel += std::abs(pu - supervised) / supervised;
    }
    CHECK(total_rel / seeds < 0.05);
}

TEST_CASE("full-chain gradients match finite differences") {
    Rng rng(31);
    const double step = 1e-5;
    int done = 0;
    while (done < 25) {
        auto corpus = make_corpus({U"abcab"});
        EncoderConfig cfg = make_encoder_config(corpus, 2 + rng.below(3), rng.below(3),
                                                1000 + done);
        EncoderParams enc = init_encoder(cfg);
        for (auto& v : enc.embedding.data) v = rng.uniform(-0.6, 0.6);
        for (auto& v : enc.mix) v = rng.uniform(-0.6, 0.6);
        ClassifierParams cls{{}, rng.uniform(-0.5, 0.5)};
        cls.w.resize(2 * cfg.embed_dim);
        for (auto& v : cls.w) v = rng.uniform(-0.6, 0.6);
        const PUConfig pu{0.2 + 0.3 * rng.uniform01(), 0.5};
        const Sentence& s = corpus[0];
        const auto spans = enumerate_spans(s.chars.size());
        // first few spans positive, rest unlabeled
        const std::size_t n_pos = 1 + rng.below(spans.size() - 1);

        auto loss_of = [&](const EncoderParams& e, const ClassifierParams& c) {
            const Matrix h = encode(cfg, e, s);
            std::vector<double> pos, unl;
            for (std::size_t k = 0; k < spans.size(); ++k) {
                const double p = classify_span(h.row(spans[k].first), h.row(spans[k].second),
                                               cfg.embed_dim, c);
                (k < n_pos ? pos : unl).push_back(p);
            }
            return pu_loss(pos, unl, pu);
        };

        // skip instances near the clamp kink, where the subgradient choice
        // and the two-sided difference disagree by construction
        {
            const Matrix h = encode(cfg, enc, s);
            std::vector<double> pos, unl;
            for (std::size_t k = 0; k < spans.size(); ++k) {
                const double p = classify_span(h.row(spans[k].first), h.row(spans[k].second),
                                               cfg.embed_dim, cls);
                (k < n_pos ? pos : unl).push_back(p);
            }
            double pos_as_neg = 0.0, unl_as_neg = 0.0;
            for (double p : pos) pos_as_neg -= std::log(1.0 - p);
            pos_as_neg /= pos.empty() ? 1.0 : pos.size();
            for (double p : unl) unl_as_neg -= std::log(1.0 - p);
            unl_as_neg /= unl.empty() ? 1.0 : unl.size();
            if (std::abs(unl_as_neg - pu.pi_p * pos_as_neg) < 1e-3) continue;
        }

        // analytic gradients via the training backward path
        const Matrix h = encode(cfg, enc, s);
        std::vector<double> pos, unl;
        std::vector<Span> pos_spans, unl_spans;
        for (std::size_t k = 0; k < spans.size(); ++k) {
            const double p = classify_span(h.row(spans[k].first), h.row(spans[k].second),
                                           cfg.embed_dim, cls);
            if (k < n_pos) { pos.push_back(p); pos_spans.push_back(spans[k]); }
            else { unl.push_back(p); unl_spans.push_back(spans[k]); }
        }
        std::vector<double> d_pos, d_unl;
        pu_loss_grad(pos, unl, pu, d_pos, d_unl);
        Matrix upstream(h.rows, h.cols);
        std::vector<double> grad_w(2 * cfg.embed_dim, 0.0);
        double grad_b = 0.0;
        auto backprop = [&](const Span& sp, double p, double dldp) {
            const double dz = dldp * p * (1.0 - p);
            for (std::size_t k = 0; k < cfg.embed_dim; ++k) {
                grad_w[k] += dz * h.at(sp.first, k);
                grad_w[cfg.embed_dim + k] += dz * h.at(sp.second, k);
                upstream.at(sp.first, k) += dz * cls.w[k];
                upstream.at(sp.second, k) += dz * cls.w[cfg.embed_dim + k];
            }
            grad_b += dz;
        };
        for (std::size_t k = 0; k < pos.size(); ++k) backprop(pos_spans[k], pos[k], d_pos[k]);
        for (std::size_t k = 0; k < unl.size(); ++k) backprop(unl_spans[k], unl[k], d_unl[k]);
        const EncoderGrad eg = encoder_backward(cfg, enc, s, upstream);

        auto check_param = [&](double* slot, double analytic) {
            const double save = *slot;
            *slot = save + step;
            const double up = loss_of(enc, cls);
            *slot = save - step;
            const double down = loss_of(enc, cls);
            *slot = save;
            const double numeric = (up - down) / (2.0 * step);
            const double rel = std::abs(analytic - numeric) /
                               std::max({1.0, std::abs(analytic), std::abs(numeric)});
            CHECK(rel <= 1e-4);
        };
        for (std::size_t k = 0; k < enc.embedding.data.size(); ++k)
            check_param(&enc.embedding.data[k], eg.embedding.data[k]);
        for (std::size_t k = 0; k < enc.mix.size(); ++k) check_param(&enc.mix[k], eg.mix[k]);
        for (std::size_t k = 0; k < cls.w.size(); ++k) check_param(&cls.w[k], grad_w[k]);
        check_param(&cls.b, grad_b);
        ++done;
    }
}

namespace {

// tiny training setup reused by the behavioural tests
struct TinyRun {
    std::vector<Sentence> corpus;
    HeldoutSet heldout;
    EncoderConfig cfg;
    EncoderParams enc;
    ClassifierParams cls;
    Lexicon lex{3};

    TinyRun() {
        corpus = make_corpus({U"abcd", U"cdab", U"abab", U"cdcd", U"abcd", U"dcba"});
        lex.add_seed(U"ab");
        lex.add_seed(U"cd");
        cfg = make_encoder_config(corpus, 4, 1, 7);
        enc = init_encoder(cfg);
        cls = zero_classifier(4);
        heldout.sentences = {corpus.back()};
        heldout.true_spans = {{}};
    }
};

}  // namespace

TEST_CASE("zero iterations returns the parameters unchanged") {
    TinyRun t;
    TrainConfig tc;
    tc.iterations = 0;
    const auto result = train_sbr(t.corpus, t.heldout, t.cfg, t.enc, t.cls, t.lex, {0.2, 0.5}, tc);
    CHECK(result.encoder.embedding.data == t.enc.embedding.data);
    CHECK(result.encoder.mix == t.enc.mix);
    CHECK(result.classifier.w == t.cls.w);
    CHECK(result.classifier.b == t.cls.b);
    CHECK(result.log.empty());
    CHECK(result.lexicon.size() == t.lex.size());
}

TEST_CASE("a fixed seed reproduces the metrics log bit for bit") {
    TinyRun t;
    TrainConfig tc;
    tc.iterations = 5;
    tc.batch_size = 2;
    tc.learning_rate = 0.05;
    tc.seed = 99;
    const auto a = train_sbr(t.corpus, t.heldout, t.cfg, t.enc, t.cls, t.lex, {0.2, 0.5}, tc);
    const auto b = train_sbr(t.corpus, t.heldout, t.cfg, t.enc, t.cls, t.lex, {0.2, 0.5}, tc);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t k = 0; k < a.log.size(); ++k)
        CHECK(format_metrics_line(a.log[k]) == format_metrics_line(b.log[k]));
    CHECK(a.encoder.embedding.data == b.encoder.embedding.data);
    CHECK(a.classifier.w == b.classifier.w);
}

TEST_CASE("training rejects bad preconditions") {
    TinyRun t;
    TrainConfig tc;
    CHECK_THROWS_AS(train_sbr({}, t.heldout, t.cfg, t.enc, t.cls, t.lex, {0.2, 0.5}, tc),
                    std::invalid_argument);
    Lexicon unrelated(3);
    unrelated.add_seed(U"zz");
    CHECK_THROWS_AS(train_sbr(t.corpus, t.heldout, t.cfg, t.enc, t.cls, unrelated, {0.2, 0.5}, tc),
                    std::invalid_argument);
}

TEST_CASE("lexicon only grows during training") {
    TinyRun t;
    TrainConfig tc;
    tc.iterations = 8;
    tc.batch_size = 3;
    tc.seed = 5;
    const auto result = train_sbr(t.corpus, t.heldout, t.cfg, t.enc, t.cls, t.lex, {0.2, 0.5}, tc);
    CHECK(result.lexicon.size() >= t.lex.size());
    CHECK(result.lexicon.contains(U"ab"));
    CHECK(result.lexicon.contains(U"cd"));
}

TEST_CASE("untrained classifier at threshold 1/2 keeps every span") {
    TinyRun t;
    const Sentence s{0, U"abcd"};
    const auto spans = predict_boundaries(t.cfg, t.enc, zero_classifier(4), s, 0.5);
    CHECK(spans.size() == enumerate_spans(4).size());  // p = 0.5 >= 0.5 everywhere

    const auto none = predict_boundaries(t.cfg, t.enc, zero_classifier(4), s, 1.0);
    CHECK(none.empty());  // the sigmoid never reaches 1
}

TEST_CASE("metrics line format") {
    EpochMetrics m;
    m.epoch = 3;
    m.loss = 0.5;
    m.promoted = 12;
    m.heldout_precision = 0.25;
    m.heldout_recall = 1.0;
    m.heldout_f1 = 0.4;
    CHECK(format_metrics_line(m) == "3\t0.500000\t12\t0.250000\t1.000000\t0.400000");
}

TEST_CASE("model files round-trip") {
    testutil::TempDir tmp("model");
    TinyRun t;
    Rng rng(12);
    for (auto& v : t.enc.embedding.data) v = rng.uniform(-1.0, 1.0);
    for (auto& v : t.cls.w) v = rng.uniform(-1.0, 1.0);
    t.cls.b = 0.125;
    const auto path = tmp.file("m.bin");
    save_model({t.cfg, t.enc, t.cls}, path);
    const auto back = load_model(path);
    CHECK(back.enc_cfg.vocab == t.cfg.vocab);
    CHECK(back.enc_cfg.embed_dim == t.cfg.embed_dim);
    CHECK(back.enc_cfg.window == t.cfg.window);
    CHECK(back.enc_params.embedding.data == t.enc.embedding.data);
    CHECK(back.enc_params.mix == t.enc.mix);
    CHECK(back.classifier.w == t.cls.w);
    CHECK(back.classifier.b == t.cls.b);

    CHECK_THROWS_AS(load_model(tmp.file("missing.bin")), std::runtime_error);
}
