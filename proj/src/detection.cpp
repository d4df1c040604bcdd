#include "motrack/detection.hpp"

#include <algorithm>
#include <fstream>

#include "motrack/errors.hpp"
#include "motrack/text.hpp"

namespace motrack {
namespace {

constexpr const char* kCsvHeader = "frame,cx,cy,w,h,confidence";

void validate(const Detection& d, const std::string& context) {
  if (d.frame < 0) throw format_error(context + ": frame index must be >= 0");
  if (!(d.box.w > 0.0) || !(d.box.h > 0.0))
    throw format_error(context + ": box size must be positive");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
    throw format_error(context + ": confidence must be in [0, 1]");
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace

const char* level_name(Level level) {
  switch (level) {
    case Level::low: return "low";
    case Level::medium: return "medium";
    case Level::high: return "high";
    case Level::builtin: return "builtin";
  }
  throw config_error("unknown detection level");
}

Level parse_level(const std::string& name) {
  if (name == "low") return Level::low;
  if (name == "medium") return Level::medium;
  if (name == "high") return Level::high;
  if (name == "builtin") return Level::builtin;
  throw config_error("unknown detection level: '" + name + "'");
}

void DetectionSet::add(const Detection& d) {
  validate(d, "detection");
  if (d.frame >= num_frames()) frames_.resize(d.frame + 1);
  frames_[d.frame].push_back(d);
}

void DetectionSet::resize_frames(int n) {
  if (n < 0) throw config_error("frame count must be >= 0");
  frames_.resize(n);
}

const std::vector<Detection>& DetectionSet::frame(int t) const {
  static const std::vector<Detection> kEmpty;
  if (t < 0 || t >= num_frames()) return kEmpty;
  return frames_[t];
}

std::size_t DetectionSet::total() const {
  std::size_t n = 0;
  for (const auto& f : frames_) n += f.size();
  return n;
}

std::vector<Detection> DetectionSet::flatten() const {
  std::vector<Detection> out;
  out.reserve(total());
  for (const auto& f : frames_)
    out.insert(out.end(), f.begin(), f.end());
  return out;
}

DetectionSet read_detections(const std::string& path, Level level) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open detection file: " + path);

  DetectionSet set;
  std::string line;
  if (!std::getline(in, line)) return set;  // zero-byte file: empty set

  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw format_error(path + ": expected header '" + std::string(kCsvHeader) + "', got '" +
                       line + "'");

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string context = path + ":" + std::to_string(lineno);
    auto fields = split_csv(line);
    if (fields.size() != 6)
      throw format_error(context + ": expected 6 fields, got " +
                         std::to_string(fields.size()));
    Detection d;
    d.frame = static_cast<int>(parse_long(fields[0], context));
    d.box.cx = parse_double(fields[1], context);
    d.box.cy = parse_double(fields[2], context);
    d.box.w = parse_double(fields[3], context);
    d.box.h = parse_double(fields[4], context);
    d.confidence = parse_double(fields[5], context);
    d.level = level;
    validate(d, context);
    set.add(d);
  }
  return set;
}

void write_detections(const std::string& path, const DetectionSet& set) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write detection file: " + path);
  out << kCsvHeader << "\n";
  for (int t = 0; t < set.num_frames(); ++t)
    for (const Detection& d : set.frame(t))
      out << d.frame << ',' << fmt_double(d.box.cx) << ',' << fmt_double(d.box.cy) << ','
          << fmt_double(d.box.w) << ',' << fmt_double(d.box.h) << ','
          << fmt_double(d.confidence) << "\n";
  if (!out) throw io_error("failed writing detection file: " + path);
}

DetectionSet merge_levels(const std::vector<DetectionSet>& sets) {
  int frames = 0;
  for (const auto& s : sets) frames = std::max(frames, s.num_frames());
  DetectionSet merged(frames);
  for (int t = 0; t < frames; ++t)
    for (const auto& s : sets)
      for (const Detection& d : s.frame(t)) merged.add(d);
  return merged;
}

DetectionSet blob_detect(const std::vector<FeatureStack>& stacks, const BlobParams& params) {
  if (stacks.empty()) throw config_error("blob detector needs at least one frame");
  if (params.min_area > params.max_area)
    throw config_error("blob detector min_area exceeds max_area");
  if (params.min_area < 1) throw config_error("blob detector min_area must be >= 1");
  if (!(params.box_size > 0.0)) throw config_error("blob detector box_size must be > 0");
  if (params.threshold < 0 || params.threshold > 255)
    throw config_error("blob detector threshold must be in [0, 255]");

  DetectionSet set(static_cast<int>(stacks.size()));
  std::vector<int> queue;
  for (int t = 0; t < static_cast<int>(stacks.size()); ++t) {
    const ImageU8& dev = stacks[t].deviation;
    const int w = dev.width, h = dev.height;
    std::vector<std::uint8_t> seen(dev.size(), 0);

    for (int y0 = 0; y0 < h; ++y0) {
      for (int x0 = 0; x0 < w; ++x0) {
        std::size_t start = static_cast<std::size_t>(y0) * w + x0;
        if (seen[start] || dev.data[start] <= params.threshold) continue;

        // Flood fill one 8-connected component, accumulating its moments.
        queue.clear();
        queue.push_back(static_cast<int>(start));
        seen[start] = 1;
        long long sum_x = 0, sum_y = 0, sum_val = 0;
        int area = 0;
        while (!queue.empty()) {
          int idx = queue.back();
          queue.pop_back();
          int x = idx % w, y = idx / w;
          ++area;
          sum_x += x;
          sum_y += y;
          sum_val += dev.data[idx];
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              int nx = x + dx, ny = y + dy;
              if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
              std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
              if (seen[nidx] || dev.data[nidx] <= params.threshold) continue;
              seen[nidx] = 1;
              queue.push_back(static_cast<int>(nidx));
            }
          }
        }

        if (area < params.min_area || area > params.max_area) continue;
        Detection d;
        d.frame = t;
        d.box = Box{static_cast<double>(sum_x) / area, static_cast<double>(sum_y) / area,
                    params.box_size, params.box_size};
        d.confidence = static_cast<double>(sum_val) / area / 255.0;
        d.level = Level::builtin;
        set.add(d);
      }
    }
  }
  return set;
}

}  // namespace motrack
