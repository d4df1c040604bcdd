#include "motrack/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "motrack/errors.hpp"

namespace motrack {
namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::string& path, const char* what) {
  skip_separators(in);
  long long value = 0;
  bool any = false;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    any = true;
    if (value > 1 << 30) break;
  }
  if (!any || value <= 0 || value > 1 << 30)
    throw format_error(path + ": bad " + what + " in NetPBM header");
  return static_cast<int>(value);
}

}  // namespace

ImageU8 read_image_gray(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open image: " + path);

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || (m1 != '5' && m1 != '6'))
    throw format_error(path + ": not a binary PGM (P5) or PPM (P6) file");
  bool color = (m1 == '6');

  int width = read_header_int(in, path, "width");
  int height = read_header_int(in, path, "height");
  int maxval = read_header_int(in, path, "maxval");
  if (maxval != 255)
    throw format_error(path + ": only 8-bit images (maxval 255) are supported");

  // Exactly one whitespace byte separates the header from the pixel data.
  int sep = in.get();
  if (sep == EOF || !std::isspace(sep))
    throw format_error(path + ": malformed NetPBM header");

  std::size_t count = static_cast<std::size_t>(width) * height;
  ImageU8 img(width, height);
  if (color) {
    std::vector<std::uint8_t> rgb(count * 3);
    in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    if (static_cast<std::size_t>(in.gcount()) != rgb.size())
      throw format_error(path + ": truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      // Rec. 601 luma, rounded to nearest.
      double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
      img.data[i] = clamp_u8(y);
    }
  } else {
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
      throw format_error(path + ": truncated pixel data");
  }
  return img;
}

void write_pgm(const std::string& path, const ImageU8& img) {
  if (img.empty()) throw config_error("refusing to write empty image: " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write image: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw io_error("failed writing image: " + path);
}

void write_ppm(const std::string& path, const ImageU8& r, const ImageU8& g, const ImageU8& b) {
  if (r.empty() || !r.same_size(g) || !r.same_size(b))
    throw config_error("PPM channels must be non-empty and equally sized: " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write image: " + path);
  out << "P6\n" << r.width << " " << r.height << "\n255\n";
  std::vector<std::uint8_t> rgb(r.size() * 3);
  for (std::size_t i = 0; i < r.size(); ++i) {
    rgb[3 * i] = r.data[i];
    rgb[3 * i + 1] = g.data[i];
    rgb[3 * i + 2] = b.data[i];
  }
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (!out) throw io_error("failed writing image: " + path);
}

}  // namespace motrack
