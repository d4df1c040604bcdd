#pragma once

#include <vector>

#include "motrack/image.hpp"
#include "motrack/imaging.hpp"

namespace motrack {

// Dense per-pixel flow between two frames, in pixels per frame step.
struct FlowField {
  GridF u;
  GridF v;
  GridF magnitude;
};

// Dense Lucas-Kanade flow from prev to next. Intensities are normalized to
// [0, 1] before differentiation, and the window-averaged structure tensor is
// checked per pixel: a smallest eigenvalue under eig_threshold marks the
// system ill-conditioned there and the flow is set to zero. `window` is the
// odd side length of the averaging window.
FlowField lucas_kanade_flow(const ImageU8& prev, const ImageU8& next, int window = 15,
                            double eig_threshold = 1e-4);

// Per-pixel temporal median over all frames; the lower median for even counts.
ImageU8 median_background(const std::vector<ImageU8>& frames);

// Absolute deviation |frame - background| per pixel.
ImageU8 median_deviation(const ImageU8& frame, const ImageU8& background);

// Per-frame motion-feature channels. Intensity passes through untouched;
// flow and deviation are each rescaled to [0, 255] with one global affine
// map per channel, so frames stay comparable across the video:
//   intensity  raw grayscale frame
//   flow       Lucas-Kanade flow magnitude (frame 0 has none and is zero)
//   deviation  |frame - temporal median|
struct FeatureStack {
  ImageU8 intensity;
  ImageU8 flow;
  ImageU8 deviation;
};

// `presmooth_sigma` > 0 blurs both inputs of the flow computation with a
// Gaussian of that sigma; the intensity and deviation channels always use the
// raw frames. Needs at least two frames.
std::vector<FeatureStack> build_feature_stack(const FrameSequence& seq, int window = 15,
                                              double presmooth_sigma = 0.0);

// Separable Gaussian blur used for flow pre-smoothing; exposed for tests.
GridF gaussian_blur(const GridF& img, double sigma);

}  // namespace motrack
