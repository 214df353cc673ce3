#include "seglearn/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace seglearn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long n = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': " + v);
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long n = std::stoull(v, &used);
        if (used != v.size() || (!v.empty() && v[0] == '-')) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config: bad unsigned integer for '" + key + "': " + v);
    }
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

std::string fmt_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));

        if (key == "corpus") cfg.corpus = value;
        else if (key == "seed_lexicon") cfg.seed_lexicon = value;
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "gold") cfg.gold = value;
        else if (key == "embed_dim") cfg.embed_dim = static_cast<std::size_t>(to_int(key, value));
        else if (key == "window") cfg.window = static_cast<std::size_t>(to_int(key, value));
        else if (key == "pi_p") cfg.pi_p = to_real(key, value);
        else if (key == "gamma") cfg.gamma = to_real(key, value);
        else if (key == "iterations") cfg.iterations = static_cast<int>(to_int(key, value));
        else if (key == "batch_size") cfg.batch_size = static_cast<int>(to_int(key, value));
        else if (key == "learning_rate") cfg.learning_rate = to_real(key, value);
        else if (key == "decision_threshold") cfg.decision_threshold = to_real(key, value);
        else if (key == "heldout_ratio") cfg.heldout_ratio = to_real(key, value);
        else if (key == "k_threshold") cfg.k_threshold = static_cast<int>(to_int(key, value));
        else if (key == "keep_ratio") cfg.keep_ratio = to_real(key, value);
        else if (key == "max_ngram_len") cfg.max_ngram_len = static_cast<int>(to_int(key, value));
        else if (key == "bim_distance") cfg.bim_distance = static_cast<int>(to_int(key, value));
        else if (key == "seed") cfg.seed = to_uint(key, value);
        else throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const RunConfig& cfg) {
    if (cfg.embed_dim < 2) throw ConfigError("config: embed_dim must be >= 2");
    if (!(cfg.pi_p > 0.0 && cfg.pi_p < 1.0)) throw ConfigError("config: pi_p must be in (0, 1)");
    if (!(cfg.gamma > 0.0)) throw ConfigError("config: gamma must be > 0");
    if (cfg.iterations < 1) throw ConfigError("config: iterations must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("config: learning_rate must be > 0");
    if (!(cfg.decision_threshold > 0.0 && cfg.decision_threshold < 1.0))
        throw ConfigError("config: decision_threshold must be in (0, 1)");
    if (!(cfg.heldout_ratio >= 0.0 && cfg.heldout_ratio < 1.0))
        throw ConfigError("config: heldout_ratio must be in [0, 1)");
    if (cfg.k_threshold < 1) throw ConfigError("config: k_threshold must be >= 1");
    if (!(cfg.keep_ratio > 0.0 && cfg.keep_ratio <= 1.0))
        throw ConfigError("config: keep_ratio must be in (0, 1]");
    if (cfg.max_ngram_len < 1) throw ConfigError("config: max_ngram_len must be >= 1");
    if (cfg.bim_distance < 1) throw ConfigError("config: bim_distance must be >= 1");
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "corpus=" << cfg.corpus << '\n';
    out << "seed_lexicon=" << cfg.seed_lexicon << '\n';
    out << "out_dir=" << cfg.out_dir << '\n';
    out << "gold=" << cfg.gold << '\n';
    out << "embed_dim=" << cfg.embed_dim << '\n';
    out << "window=" << cfg.window << '\n';
    out << "pi_p=" << fmt_real(cfg.pi_p) << '\n';
    out << "gamma=" << fmt_real(cfg.gamma) << '\n';
    out << "iterations=" << cfg.iterations << '\n';
    out << "batch_size=" << cfg.batch_size << '\n';
    out << "learning_rate=" << fmt_real(cfg.learning_rate) << '\n';
    out << "decision_threshold=" << fmt_real(cfg.decision_threshold) << '\n';
    out << "heldout_ratio=" << fmt_real(cfg.heldout_ratio) << '\n';
    out << "k_threshold=" << cfg.k_threshold << '\n';
    out << "keep_ratio=" << fmt_real(cfg.keep_ratio) << '\n';
    out << "max_ngram_len=" << cfg.max_ngram_len << '\n';
    out << "bim_distance=" << cfg.bim_distance << '\n';
    out << "seed=" << cfg.seed << '\n';
    return out.str();
}

}  // namespace seglearn
