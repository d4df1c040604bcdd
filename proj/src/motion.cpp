#include "motrack/motion.hpp"

#include <algorithm>
#include <cmath>

#include "motrack/errors.hpp"

namespace motrack {
namespace {

// Summed-area table with a zero top row and left column, so any window sum is
// four lookups.
void integral_image(const std::vector<double>& src, int w, int h, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    const double* srow = src.data() + static_cast<std::size_t>(y) * w;
    const double* prev = out.data() + static_cast<std::size_t>(y) * (w + 1);
    double* cur = out.data() + static_cast<std::size_t>(y + 1) * (w + 1);
    double run = 0.0;
    for (int x = 0; x < w; ++x) {
      run += srow[x];
      cur[x + 1] = prev[x + 1] + run;
    }
  }
}

inline double window_sum(const std::vector<double>& ii, int w1, int x0, int y0, int x1, int y1) {
  // Inclusive pixel range [x0, x1] x [y0, y1].
  const std::size_t stride = static_cast<std::size_t>(w1);
  return ii[(y1 + 1) * stride + (x1 + 1)] - ii[y0 * stride + (x1 + 1)] -
         ii[(y1 + 1) * stride + x0] + ii[y0 * stride + x0];
}

GridF normalized(const ImageU8& img) {
  GridF out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = img.data[i] / 255.0;
  return out;
}

FlowField lk_impl(const GridF& P, const GridF& N, int window, double eig_threshold) {
  const int w = P.width, h = P.height;
  const int half = window / 2;

  // Clamped central differences on the earlier frame, temporal difference
  // between the two.
  std::vector<double> ix(P.size()), iy(P.size()), it(P.size());
  for (int y = 0; y < h; ++y) {
    int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      ix[i] = 0.5 * (P.at(xp, y) - P.at(xm, y));
      iy[i] = 0.5 * (P.at(x, yp) - P.at(x, ym));
      it[i] = N.data[i] - P.data[i];
    }
  }

  std::vector<double> prod(P.size());
  std::vector<double> ii_xx, ii_xy, ii_yy, ii_xt, ii_yt;
  auto build = [&](const std::vector<double>& a, const std::vector<double>& b,
                   std::vector<double>& ii) {
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
    integral_image(prod, w, h, ii);
  };
  build(ix, ix, ii_xx);
  build(ix, iy, ii_xy);
  build(iy, iy, ii_yy);
  build(ix, it, ii_xt);
  build(iy, it, ii_yt);

  FlowField f{GridF(w, h), GridF(w, h), GridF(w, h)};
  const int w1 = w + 1;
  for (int y = 0; y < h; ++y) {
    int y0 = std::max(y - half, 0), y1 = std::min(y + half, h - 1);
    for (int x = 0; x < w; ++x) {
      int x0 = std::max(x - half, 0), x1 = std::min(x + half, w - 1);
      double n = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);

      double sxx = window_sum(ii_xx, w1, x0, y0, x1, y1);
      double sxy = window_sum(ii_xy, w1, x0, y0, x1, y1);
      double syy = window_sum(ii_yy, w1, x0, y0, x1, y1);

      // Window-mean structure tensor; its smallest eigenvalue measures how
      // well-constrained the local system is, independent of window size.
      double mxx = sxx / n, mxy = sxy / n, myy = syy / n;
      double tr = mxx + myy;
      double det_m = mxx * myy - mxy * mxy;
      double disc = std::sqrt(std::max(tr * tr / 4.0 - det_m, 0.0));
      double lambda_min = tr / 2.0 - disc;

      std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (lambda_min < eig_threshold) continue;  // leave (0, 0)

      double sxt = window_sum(ii_xt, w1, x0, y0, x1, y1);
      double syt = window_sum(ii_yt, w1, x0, y0, x1, y1);
      double det = sxx * syy - sxy * sxy;
      double b1 = -sxt, b2 = -syt;
      double u = (syy * b1 - sxy * b2) / det;
      double v = (sxx * b2 - sxy * b1) / det;
      f.u.data[i] = u;
      f.v.data[i] = v;
      f.magnitude.data[i] = std::sqrt(u * u + v * v);
    }
  }
  return f;
}

// One global affine map onto [0, 255]; a flat channel collapses to zero.
ImageU8 rescale_to_u8(const GridF& g, double lo, double hi) {
  ImageU8 out(g.width, g.height);
  if (hi > lo) {
    double scale = 255.0 / (hi - lo);
    for (std::size_t i = 0; i < g.size(); ++i)
      out.data[i] = clamp_u8((g.data[i] - lo) * scale);
  }
  return out;
}

}  // namespace

GridF gaussian_blur(const GridF& img, double sigma) {
  if (sigma <= 0.0) return img;
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& k : kernel) k /= sum;

  const int w = img.width, h = img.height;
  GridF tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * img.at(std::clamp(x + k, 0, w - 1), y);
      tmp.at(x, y) = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * tmp.at(x, std::clamp(y + k, 0, h - 1));
      out.at(x, y) = acc;
    }
  }
  return out;
}

FlowField lucas_kanade_flow(const ImageU8& prev, const ImageU8& next, int window,
                            double eig_threshold) {
  if (prev.empty() || !prev.same_size(next))
    throw config_error("flow needs two non-empty frames of equal size");
  if (window < 3 || window % 2 == 0)
    throw config_error("flow window must be odd and >= 3");
  return lk_impl(normalized(prev), normalized(next), window, eig_threshold);
}

ImageU8 median_background(const std::vector<ImageU8>& frames) {
  if (frames.empty()) throw config_error("median background needs at least one frame");
  const int w = frames.front().width, h = frames.front().height;
  for (const ImageU8& f : frames)
    if (!f.same_size(frames.front()))
      throw config_error("median background frames must share dimensions");
  const std::size_t T = frames.size();
  if (T >= 65535) throw config_error("median background supports at most 65534 frames");

  // Lower median: with T sorted values, index (T - 1) / 2.
  const std::size_t need = (T - 1) / 2 + 1;

  // Histogram a strip of rows at a time to keep the counting buffer small.
  const std::size_t budget = std::size_t{32} << 20;
  int strip_rows = static_cast<int>(std::max<std::size_t>(
      1, budget / (static_cast<std::size_t>(w) * 256 * sizeof(std::uint16_t))));
  strip_rows = std::min(strip_rows, h);

  ImageU8 bg(w, h);
  std::vector<std::uint16_t> counts(static_cast<std::size_t>(strip_rows) * w * 256);
  for (int ys = 0; ys < h; ys += strip_rows) {
    int rows = std::min(strip_rows, h - ys);
    std::fill(counts.begin(), counts.begin() + static_cast<std::size_t>(rows) * w * 256, 0);
    for (const ImageU8& f : frames) {
      for (int y = 0; y < rows; ++y) {
        const std::uint8_t* src = f.row(ys + y);
        std::uint16_t* crow = counts.data() + static_cast<std::size_t>(y) * w * 256;
        for (int x = 0; x < w; ++x) ++crow[static_cast<std::size_t>(x) * 256 + src[x]];
      }
    }
    for (int y = 0; y < rows; ++y) {
      const std::uint16_t* crow = counts.data() + static_cast<std::size_t>(y) * w * 256;
      std::uint8_t* dst = bg.row(ys + y);
      for (int x = 0; x < w; ++x) {
        const std::uint16_t* hist = crow + static_cast<std::size_t>(x) * 256;
        std::size_t cum = 0;
        for (int v = 0; v < 256; ++v) {
          cum += hist[v];
          if (cum >= need) {
            dst[x] = static_cast<std::uint8_t>(v);
            break;
          }
        }
      }
    }
  }
  return bg;
}

ImageU8 median_deviation(const ImageU8& frame, const ImageU8& background) {
  if (frame.empty() || !frame.same_size(background))
    throw config_error("deviation needs a frame and background of equal size");
  ImageU8 out(frame.width, frame.height);
  for (std::size_t i = 0; i < frame.size(); ++i)
    out.data[i] = static_cast<std::uint8_t>(std::abs(frame.data[i] - background.data[i]));
  return out;
}

std::vector<FeatureStack> build_feature_stack(const FrameSequence& seq, int window,
                                              double presmooth_sigma) {
  const int T = seq.num_frames();
  if (T < 2) throw config_error("feature extraction needs at least two frames");
  const int w = seq.width(), h = seq.height();

  ImageU8 bg = median_background(seq.frames);

  // Flow magnitudes are kept (as floats) so both channels can be rescaled by
  // their global extrema once those are known. Frame 0 has no predecessor and
  // contributes a zero flow channel, which the extrema include.
  std::vector<Grid<float>> mags(T);
  mags[0] = Grid<float>(w, h, 0.0f);
  double flow_lo = 0.0, flow_hi = 0.0;
  int dev_lo = 256, dev_hi = -1;

  GridF prev_n = normalized(seq.frames[0]);
  if (presmooth_sigma > 0.0) prev_n = gaussian_blur(prev_n, presmooth_sigma);
  for (int t = 1; t < T; ++t) {
    GridF next_n = normalized(seq.frames[t]);
    if (presmooth_sigma > 0.0) next_n = gaussian_blur(next_n, presmooth_sigma);
    FlowField f = lk_impl(prev_n, next_n, window, 1e-4);
    Grid<float> m(w, h);
    for (std::size_t i = 0; i < f.magnitude.size(); ++i) {
      double v = f.magnitude.data[i];
      m.data[i] = static_cast<float>(v);
      if (v < flow_lo) flow_lo = v;
      if (v > flow_hi) flow_hi = v;
    }
    mags[t] = std::move(m);
    prev_n = std::move(next_n);
  }

  for (int t = 0; t < T; ++t) {
    ImageU8 dev = median_deviation(seq.frames[t], bg);
    for (std::uint8_t v : dev.data) {
      dev_lo = std::min(dev_lo, static_cast<int>(v));
      dev_hi = std::max(dev_hi, static_cast<int>(v));
    }
  }

  std::vector<FeatureStack> stacks(T);
  for (int t = 0; t < T; ++t) {
    FeatureStack& s = stacks[t];
    s.intensity = seq.frames[t];

    GridF mag(w, h);
    for (std::size_t i = 0; i < mag.size(); ++i) mag.data[i] = mags[t].data[i];
    mags[t] = Grid<float>();  // free as we go
    s.flow = rescale_to_u8(mag, flow_lo, flow_hi);

    ImageU8 dev = median_deviation(seq.frames[t], bg);
    GridF devf(w, h);
    for (std::size_t i = 0; i < devf.size(); ++i) devf.data[i] = dev.data[i];
    s.deviation = rescale_to_u8(devf, dev_lo, dev_hi);
  }
  return stacks;
}

}  // namespace motrack
