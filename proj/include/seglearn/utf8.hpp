#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace seglearn {

// Decodes UTF-8 bytes into Unicode scalar values. Rejects overlong forms,
// surrogates, and values beyond U+10FFFF; throws Utf8Error carrying the
// byte offset of the first bad byte.
struct Utf8Error {
    std::size_t byte_offset;
    std::string message;
};

std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view chars);
std::string utf8_encode(char32_t c);

}  // namespace seglearn
