#pragma once

#include <string>

#include "motrack/image.hpp"

namespace motrack {

// Binary NetPBM I/O, the frame format for the whole pipeline: lossless, 8-bit,
// and trivial to inspect. Readers accept P5 (grayscale) and P6 (color, reduced
// to Rec. 601 luma); anything else is a format error, including maxval != 255.

ImageU8 read_image_gray(const std::string& path);

void write_pgm(const std::string& path, const ImageU8& img);

// Writes the three channels as R, G, B; all must share dimensions.
void write_ppm(const std::string& path, const ImageU8& r, const ImageU8& g, const ImageU8& b);

}  // namespace motrack
