#pragma once

namespace seglearn {

// Locale-independent character classification over fixed range tables.
// Covers the blocks that occur in practice for mixed Chinese/ASCII text:
// ASCII, Latin-1 .. Latin Extended, CJK symbols and punctuation, general
// punctuation, vertical/small/fullwidth forms.

// Unicode general categories P* (connector, dash, open, close, quote, other).
bool is_punctuation(char32_t c);

// Letters of the Latin script, including fullwidth variants.
bool is_latin_letter(char32_t c);

}  // namespace seglearn
