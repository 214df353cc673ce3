#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace seglearn {

// mt19937_64 with hand-rolled draws. The standard distributions are
// implementation-defined, so every value that reaches an output file is
// derived here from raw engine words only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // 53-bit mantissa uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n); n > 0
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace seglearn
