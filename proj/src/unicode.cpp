#include "seglearn/unicode.hpp"

#include <algorithm>
#include <iterator>

namespace seglearn {

namespace {

struct Range {
    char32_t lo;
    char32_t hi;  // inclusive
};

bool in_ranges(const Range* first, const Range* last, char32_t c) {
    auto it = std::upper_bound(first, last, c,
                               [](char32_t v, const Range& r) { return v < r.lo; });
    return it != first && c <= std::prev(it)->hi;
}

constexpr Range kPunct[] = {
    {0x0021, 0x0023}, {0x0025, 0x002A}, {0x002C, 0x002F}, {0x003A, 0x003B},
    {0x003F, 0x0040}, {0x005B, 0x005D}, {0x005F, 0x005F}, {0x007B, 0x007B},
    {0x007D, 0x007D}, {0x00A1, 0x00A1}, {0x00A7, 0x00A7}, {0x00AB, 0x00AB},
    {0x00B6, 0x00B7}, {0x00BB, 0x00BB}, {0x00BF, 0x00BF}, {0x2010, 0x2027},
    {0x2030, 0x205E}, {0x2E00, 0x2E7F}, {0x3001, 0x3003}, {0x3008, 0x3011},
    {0x3014, 0x301F}, {0x3030, 0x3030}, {0x303D, 0x303D}, {0xFE10, 0xFE19},
    {0xFE30, 0xFE52}, {0xFE54, 0xFE61}, {0xFE63, 0xFE63}, {0xFE68, 0xFE68},
    {0xFE6A, 0xFE6B}, {0xFF01, 0xFF03}, {0xFF05, 0xFF0A}, {0xFF0C, 0xFF0F},
    {0xFF1A, 0xFF1B}, {0xFF1F, 0xFF20}, {0xFF3B, 0xFF3D}, {0xFF3F, 0xFF3F},
    {0xFF5B, 0xFF5B}, {0xFF5D, 0xFF5D}, {0xFF5F, 0xFF65},
};

constexpr Range kLatin[] = {
    {0x0041, 0x005A}, {0x0061, 0x007A}, {0x00AA, 0x00AA}, {0x00BA, 0x00BA},
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF}, {0x1E00, 0x1EFF},
    {0x2C60, 0x2C7F}, {0xA720, 0xA7FF}, {0xFF21, 0xFF3A}, {0xFF41, 0xFF5A},
};

}  // namespace

bool is_punctuation(char32_t c) {
    return in_ranges(std::begin(kPunct), std::end(kPunct), c);
}

bool is_latin_letter(char32_t c) {
    return in_ranges(std::begin(kLatin), std::end(kLatin), c);
}

}  // namespace seglearn
