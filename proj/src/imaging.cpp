#include "motrack/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>

#include "motrack/errors.hpp"
#include "motrack/netpbm.hpp"
#include "motrack/text.hpp"

namespace fs = std::filesystem;

namespace motrack {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_positive(const std::string& value, const std::string& key, const std::string& path) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || out <= 0.0)
    throw config_error(path + ": manifest key '" + key + "' must be a positive number, got '" +
                       value + "'");
  return out;
}

// Splits a printf-style pattern into prefix/suffix around its single integer
// field and reports the zero-pad width (0 for plain %d).
struct PatternParts {
  std::string prefix;
  std::string suffix;
  int pad = 0;
};

PatternParts split_pattern(const std::string& pattern) {
  auto pos = pattern.find('%');
  if (pos == std::string::npos)
    throw config_error("frame pattern has no integer field: " + pattern);
  std::size_t i = pos + 1;
  int pad = 0;
  if (i < pattern.size() && pattern[i] == '0') {
    ++i;
    while (i < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[i])))
      pad = pad * 10 + (pattern[i++] - '0');
  }
  if (i >= pattern.size() || pattern[i] != 'd')
    throw config_error("frame pattern must contain exactly one %d or %0Nd field: " + pattern);
  if (pattern.find('%', i + 1) != std::string::npos)
    throw config_error("frame pattern must contain exactly one %d or %0Nd field: " + pattern);
  return {pattern.substr(0, pos), pattern.substr(i + 1), pad};
}

// Matches a filename against the pattern parts; returns the frame index or -1.
int match_index(const PatternParts& p, const std::string& name) {
  if (name.size() < p.prefix.size() + p.suffix.size() + 1) return -1;
  if (name.compare(0, p.prefix.size(), p.prefix) != 0) return -1;
  if (name.compare(name.size() - p.suffix.size(), p.suffix.size(), p.suffix) != 0) return -1;
  std::size_t begin = p.prefix.size();
  std::size_t end = name.size() - p.suffix.size();
  long long value = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    value = value * 10 + (name[i] - '0');
    if (value > 1 << 30) return -1;
  }
  if (end == begin) return -1;
  return static_cast<int>(value);
}

}  // namespace

SequenceManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open manifest: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw format_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw format_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    kv[key] = value;
  }

  for (const char* req : {"dir", "pattern", "fps", "pixel_scale_um", "medium"})
    if (!kv.count(req)) throw config_error(path + ": manifest is missing key '" + req + "'");

  SequenceManifest m;
  m.dir = kv["dir"];
  m.pattern = kv["pattern"];
  m.fps = parse_positive(kv["fps"], "fps", path);
  m.pixel_scale_um = parse_positive(kv["pixel_scale_um"], "pixel_scale_um", path);
  m.medium = kv["medium"];
  split_pattern(m.pattern);  // validate early
  return m;
}

void write_manifest(const std::string& path, const SequenceManifest& m) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write manifest: " + path);
  out << "dir = " << m.dir << "\n"
      << "pattern = " << m.pattern << "\n"
      << "fps = " << fmt_double(m.fps) << "\n"
      << "pixel_scale_um = " << fmt_double(m.pixel_scale_um) << "\n"
      << "medium = " << m.medium << "\n";
  if (!out) throw io_error("failed writing manifest: " + path);
}

std::string frame_filename(const std::string& pattern, int index) {
  PatternParts p = split_pattern(pattern);
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < p.pad)
    digits.insert(0, p.pad - digits.size(), '0');
  return p.prefix + digits + p.suffix;
}

FrameSequence load_sequence(const SequenceManifest& manifest, const std::string& manifest_path) {
  fs::path dir = manifest.dir;
  if (dir.is_relative() && !manifest_path.empty())
    dir = fs::path(manifest_path).parent_path() / dir;
  if (!fs::is_directory(dir))
    throw io_error("frame directory does not exist: " + dir.string());

  PatternParts parts = split_pattern(manifest.pattern);
  std::vector<int> indices;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    int idx = match_index(parts, entry.path().filename().string());
    if (idx >= 0) indices.push_back(idx);
  }
  if (indices.empty())
    throw io_error("no frames matching '" + manifest.pattern + "' in " + dir.string());

  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != static_cast<int>(i)) {
      std::string missing = frame_filename(manifest.pattern, static_cast<int>(i));
      throw io_error("frame sequence has a gap: missing " + (dir / missing).string());
    }
  }

  FrameSequence seq;
  seq.fps = manifest.fps;
  seq.pixel_scale_um = manifest.pixel_scale_um;
  seq.medium = manifest.medium;
  seq.frames.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    fs::path file = dir / frame_filename(manifest.pattern, static_cast<int>(i));
    ImageU8 img = read_image_gray(file.string());
    if (!seq.frames.empty() && !img.same_size(seq.frames.front()))
      throw format_error("frame size mismatch at " + file.string());
    seq.frames.push_back(std::move(img));
  }
  return seq;
}

FrameSequence crop_roi(const FrameSequence& seq, const Rect& roi) {
  if (seq.frames.empty()) throw config_error("cannot crop an empty sequence");
  if (roi.w <= 0 || roi.h <= 0 || roi.x < 0 || roi.y < 0 ||
      roi.x + roi.w > seq.width() || roi.y + roi.h > seq.height())
    throw config_error("crop rectangle lies outside the frames");

  FrameSequence out;
  out.fps = seq.fps;
  out.pixel_scale_um = seq.pixel_scale_um;
  out.medium = seq.medium;
  out.frames.reserve(seq.frames.size());
  for (const ImageU8& f : seq.frames) {
    ImageU8 c(roi.w, roi.h);
    for (int y = 0; y < roi.h; ++y)
      std::copy_n(f.row(roi.y + y) + roi.x, roi.w, c.row(y));
    out.frames.push_back(std::move(c));
  }
  return out;
}

void write_sequence(const FrameSequence& seq, const std::string& dir,
                    const std::string& pattern, const std::string& manifest_name) {
  if (seq.frames.empty()) throw config_error("cannot write an empty sequence");
  if (seq.fps <= 0.0 || seq.pixel_scale_um <= 0.0)
    throw config_error("sequence needs positive fps and pixel_scale_um to be written");
  fs::create_directories(dir);
  for (int i = 0; i < seq.num_frames(); ++i)
    write_pgm((fs::path(dir) / frame_filename(pattern, i)).string(), seq.frames[i]);

  SequenceManifest m;
  m.dir = ".";
  m.pattern = pattern;
  m.fps = seq.fps;
  m.pixel_scale_um = seq.pixel_scale_um;
  m.medium = seq.medium.empty() ? "unknown" : seq.medium;
  write_manifest((fs::path(dir) / manifest_name).string(), m);
}

}  // namespace motrack
