#include <cstdio>
#include <iostream>
#include <string>

#include "sonoscrub/image_io.hpp"
#include "sonoscrub/ocr.hpp"

// Stdio adapter speaking the subprocess OCR protocol: one image path per
// request line on stdin; the response is one token line
// text<TAB>x<TAB>y<TAB>w<TAB>h<TAB>conf per recognized token followed by a
// blank terminator. Undecodable images produce an empty response.
int main() {
    sonoscrub::GlyphOcrBackend backend;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (!line.empty()) {
            try {
                auto img = sonoscrub::load_image(line);
                for (const auto& t : backend.recognize(img))
                    std::printf("%s\t%d\t%d\t%d\t%d\t%.3f\n", t.text.c_str(), t.bbox.x_left,
                                t.bbox.y_top, t.bbox.width(), t.bbox.height(), t.confidence);
            } catch (const sonoscrub::Error&) {
                // no tokens; the blank terminator below still answers
            }
        }
        std::printf("\n");
        std::fflush(stdout);
    }
    return 0;
}
