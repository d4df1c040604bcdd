#pragma once

#include <string>
#include <vector>

#include "motrack/image.hpp"

namespace motrack {

// Describes where a frame sequence lives on disk. `dir` is resolved relative
// to the manifest file's directory when it is not absolute. `pattern` is a
// printf-style name with exactly one integer field, e.g. "frame_%05d.pgm".
struct SequenceManifest {
  std::string dir;
  std::string pattern;
  double fps = 0.0;
  double pixel_scale_um = 0.0;  // micrometres per pixel
  std::string medium;           // e.g. "collagen" or "aqueous"
};

struct FrameSequence {
  std::vector<ImageU8> frames;
  double fps = 0.0;
  double pixel_scale_um = 0.0;
  std::string medium;

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  int num_frames() const { return static_cast<int>(frames.size()); }
};

// Manifest files are plain "key = value" lines; '#' starts a comment.
SequenceManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const SequenceManifest& m);

// Expands the one integer field in `pattern` for a frame index.
std::string frame_filename(const std::string& pattern, int index);

// Loads every frame the pattern matches in the manifest directory. Frames
// must be contiguous from index 0 and share dimensions; a gap reports the
// first missing filename.
FrameSequence load_sequence(const SequenceManifest& manifest,
                            const std::string& manifest_path = "");

// Copies a rectangular region out of every frame; metadata is preserved.
// The rectangle must lie fully inside the frames.
FrameSequence crop_roi(const FrameSequence& seq, const Rect& roi);

// Writes frames as PGM files plus a manifest describing them. `pattern` is
// relative to `dir`; the manifest lands at dir/manifest_name.
void write_sequence(const FrameSequence& seq, const std::string& dir,
                    const std::string& pattern = "frame_%05d.pgm",
                    const std::string& manifest_name = "manifest.txt");

}  // namespace motrack
