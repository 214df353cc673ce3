#include "seglearn/utf8.hpp"

namespace seglearn {

namespace {

[[noreturn]] void fail(std::size_t offset, const char* what) {
    throw Utf8Error{offset, what};
}

}  // namespace

std::u32string utf8_decode(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail(i, "invalid UTF-8 lead byte");
        }
        if (i + len > bytes.size()) fail(i, "truncated UTF-8 sequence");
        for (std::size_t k = 1; k < len; ++k) {
            const auto bk = static_cast<unsigned char>(bytes[i + k]);
            if ((bk & 0xC0) != 0x80) fail(i + k, "invalid UTF-8 continuation byte");
            cp = (cp << 6) | (bk & 0x3F);
        }
        // overlong encodings
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000))
            fail(i, "overlong UTF-8 encoding");
        if (cp >= 0xD800 && cp <= 0xDFFF) fail(i, "UTF-8 encoded surrogate");
        if (cp > 0x10FFFF) fail(i, "code point out of range");
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(char32_t c) {
    std::string out;
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    return out;
}

std::string utf8_encode(std::u32string_view chars) {
    std::string out;
    out.reserve(chars.size() * 3);
    for (char32_t c : chars) out += utf8_encode(c);
    return out;
}

}  // namespace seglearn
