#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace motrack {

// Row-major 2-D grid; pixel (x, y) lives at data[y * width + x].
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  T* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }
  const T* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  template <typename U>
  bool same_size(const Grid<U>& other) const {
    return width == other.width && height == other.height;
  }

  bool operator==(const Grid&) const = default;
};

using ImageU8 = Grid<std::uint8_t>;
using GridF = Grid<double>;

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

inline std::uint8_t clamp_u8(double v) {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

}  // namespace motrack
