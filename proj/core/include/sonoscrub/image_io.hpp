#ifndef SONOSCRUB_IMAGE_IO_HPP
#define SONOSCRUB_IMAGE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

// Decodes PNG/JPEG/BMP/TIFF. 16-bit inputs are rescaled to 8-bit with a
// linear min-max mapping; alpha channels are dropped. source_id is set to
// the file stem. Throws FormatError on unreadable or unsupported files.
ScanImage load_image(const std::string& path);

// PNG only; 1 or 3 channel input.
void save_png(const ScanImage& img, const std::string& path);

// In-memory PNG bytes (used to hand frames to OCR subprocesses).
std::vector<std::uint8_t> encode_png(const ScanImage& img);

}  // namespace sonoscrub

#endif
