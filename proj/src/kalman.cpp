#include "motrack/kalman.hpp"

#include <cmath>

#include "motrack/errors.hpp"

namespace motrack {
namespace {

Mat7 transition() {
  Mat7 F = Mat7::Identity();
  F(0, 4) = 1.0;
  F(1, 5) = 1.0;
  F(2, 6) = 1.0;
  return F;
}

Eigen::Matrix<double, 4, 7> measurement_model() {
  Eigen::Matrix<double, 4, 7> H = Eigen::Matrix<double, 4, 7>::Zero();
  H(0, 0) = H(1, 1) = H(2, 2) = H(3, 3) = 1.0;
  return H;
}

void symmetrize(Mat7& P) { P = ((P + P.transpose()) * 0.5).eval(); }

}  // namespace

Vec4 box_to_measurement(const Box& box) {
  if (!(box.w > 0.0) || !(box.h > 0.0))
    throw config_error("cannot filter a box with non-positive size");
  return Vec4{box.cx, box.cy, box.w * box.h, box.w / box.h};
}

KalmanState kalman_init(const Box& box, const KalmanConfig& cfg) {
  KalmanState s;
  s.x.head<4>() = box_to_measurement(box);
  s.x.tail<3>().setZero();
  Vec7 p0;
  p0 << cfg.init_position_variance, cfg.init_position_variance, cfg.init_position_variance,
      cfg.init_position_variance, cfg.init_velocity_variance, cfg.init_velocity_variance,
      cfg.init_velocity_variance;
  s.P = p0.asDiagonal();
  return s;
}

KalmanState kalman_predict(const KalmanState& state, const KalmanConfig& cfg) {
  static const Mat7 F = transition();
  KalmanState out;
  out.x = F * state.x;
  if (out.x(2) < 1.0) out.x(2) = 1.0;  // keep the area physical
  out.P = F * state.P * F.transpose() + Mat7(cfg.process_noise.asDiagonal());
  symmetrize(out.P);
  return out;
}

KalmanState kalman_update(const KalmanState& state, const Box& box, const KalmanConfig& cfg) {
  static const Eigen::Matrix<double, 4, 7> H = measurement_model();
  const Mat4 R = cfg.measurement_noise.asDiagonal();

  Vec4 y = box_to_measurement(box) - H * state.x;
  Mat4 S = H * state.P * H.transpose() + R;
  Eigen::LLT<Mat4> llt(S);
  if (llt.info() != Eigen::Success)
    throw numerical_error("innovation covariance is not positive-definite");

  Eigen::Matrix<double, 7, 4> K = state.P * H.transpose() * llt.solve(Mat4::Identity());
  KalmanState out;
  out.x = state.x + K * y;
  Mat7 IKH = Mat7::Identity() - K * H;
  out.P = IKH * state.P * IKH.transpose() + K * R * K.transpose();
  symmetrize(out.P);
  return out;
}

Box kalman_state_box(const KalmanState& state) {
  double s = std::max(state.x(2), 1e-9);
  double r = std::max(state.x(3), 1e-9);
  double w = std::sqrt(s * r);
  return Box{state.x(0), state.x(1), w, s / w};
}

}  // namespace motrack
