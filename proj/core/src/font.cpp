#include "sonoscrub/font.hpp"

#include <map>

namespace sonoscrub::font {

namespace {

struct GlyphDef {
    char c;
    const char* rows[kGlyphHeight];  // '#' = ink, '.' = blank
};

// 0 carries a center slash, 1 a flag and base serif, 5 a square top-left
// corner and S a rounded one, 8 is waisted where B is flat: every lookalike
// pair differs in multiple pixels.
constexpr GlyphDef kDefs[] = {
    {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'I', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"}},
    {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {'N', {"#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"}},
    {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"}},
    {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
    {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
    {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
    {':', {".....", "..##.", "..##.", ".....", "..##.", "..##.", "....."}},
    {'.', {".....", ".....", ".....", ".....", ".....", "..##.", "..##."}},
    {'-', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
    {'+', {".....", "..#..", "..#..", "#####", "..#..", "..#..", "....."}},
    {'*', {"..#..", "#.#.#", ".###.", "..#..", ".###.", "#.#.#", "..#.."}},
    {'/', {"....#", "....#", "...#.", "..#..", ".#...", "#....", "#...."}},
    {'\'', {"..#..", "..#..", ".....", ".....", ".....", ".....", "....."}},
};

const std::map<char, Glyph>& table() {
    static const std::map<char, Glyph> t = [] {
        std::map<char, Glyph> m;
        for (const GlyphDef& d : kDefs) {
            Glyph g{};
            for (int r = 0; r < kGlyphHeight; ++r)
                for (int c = 0; c < kGlyphWidth; ++c)
                    if (d.rows[r][c] == '#') g[r] |= static_cast<std::uint8_t>(1u << (4 - c));
            m.emplace(d.c, g);
        }
        return m;
    }();
    return t;
}

}  // namespace

bool has_glyph(char c) { return table().count(c) > 0; }

const Glyph& glyph(char c) {
    auto it = table().find(c);
    if (it == table().end())
        throw ParameterError(std::string("font: no glyph for character '") + c + "'");
    return it->second;
}

int draw_char(ScanImage& img, char c, int x, int y, int scale, std::uint8_t value) {
    if (scale < 1) throw ParameterError("font: scale must be >= 1");
    if (c == ' ') return kAdvance * scale;
    const Glyph& g = glyph(c);
    if (x < 0 || y < 0 || x + kGlyphWidth * scale > img.width ||
        y + kGlyphHeight * scale > img.height)
        throw ParameterError("font: glyph outside canvas");
    for (int r = 0; r < kGlyphHeight; ++r) {
        for (int col = 0; col < kGlyphWidth; ++col) {
            if (!(g[r] & (1u << (4 - col)))) continue;
            for (int dy = 0; dy < scale; ++dy)
                for (int dx = 0; dx < scale; ++dx)
                    for (int ch = 0; ch < img.channels; ++ch)
                        img.at(x + col * scale + dx, y + r * scale + dy, ch) = value;
        }
    }
    return kAdvance * scale;
}

int draw_text(ScanImage& img, const std::string& text, int x, int y, int scale,
              std::uint8_t value) {
    int cx = x;
    for (char c : text) cx += draw_char(img, c, cx, y, scale, value);
    return cx - x;
}

int text_width(const std::string& text, int scale) {
    if (text.empty()) return 0;
    return (static_cast<int>(text.size()) * kAdvance - 1) * scale;
}

}  // namespace sonoscrub::font
