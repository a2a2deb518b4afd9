#ifndef SONOSCRUB_FONT_HPP
#define SONOSCRUB_FONT_HPP

#include <array>
#include <string>

#include "sonoscrub/types.hpp"

namespace sonoscrub::font {

// Fixed 5x7 bitmap font shared by the synthetic text renderer and the
// builtin recognizer. Glyphs are pairwise distinct bitmaps; lookalike pairs
// (O/0, I/1, S/5, B/8) differ in several pixels so exact matching never
// confuses them.
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kAdvance = kGlyphWidth + 1;  // one blank column between glyphs

// Row bitmaps, bit 4 = leftmost pixel.
using Glyph = std::array<std::uint8_t, kGlyphHeight>;

// Characters with a bitmap: A-Z 0-9 : . - + * / ' (space advances only).
bool has_glyph(char c);
const Glyph& glyph(char c);  // throws ParameterError for unknown characters

// Paints scaled glyphs with the given value into every channel. Returns the
// horizontal advance in pixels. Painting outside the canvas throws.
int draw_char(ScanImage& img, char c, int x, int y, int scale, std::uint8_t value);
int draw_text(ScanImage& img, const std::string& text, int x, int y, int scale,
              std::uint8_t value);

// Painted width of a string (trailing inter-glyph gap excluded).
int text_width(const std::string& text, int scale);

}  // namespace sonoscrub::font

#endif
