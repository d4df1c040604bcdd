#pragma once

#include <Eigen/Dense>

#include "motrack/box.hpp"

namespace motrack {

// Constant-velocity box filter over the state [u, v, s, r, u', v', s']:
// box center, area, aspect ratio, and the velocities of the first three.
// Aspect ratio is assumed constant. Time step is one frame.
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

struct KalmanConfig {
  // Measurement noise on [u, v, s, r]: center is trusted, area less so.
  Vec4 measurement_noise{1.0, 1.0, 10.0, 0.01};
  // Process noise; the velocity entries are small because motion between
  // consecutive frames is nearly constant-velocity.
  Vec7 process_noise{1.0, 1.0, 1.0, 0.01, 0.01, 0.01, 1e-4};
  // Initial variances: moderate on observed components, large on the
  // unobserved velocities.
  double init_position_variance = 10.0;
  double init_velocity_variance = 1000.0;
};

struct KalmanState {
  Vec7 x = Vec7::Zero();
  Mat7 P = Mat7::Identity();
};

// State from a first observation: velocities zero, high velocity uncertainty.
KalmanState kalman_init(const Box& box, const KalmanConfig& cfg = {});

// One constant-velocity step; area is clamped to >= 1 so the box stays valid.
KalmanState kalman_predict(const KalmanState& state, const KalmanConfig& cfg = {});

// Measurement update with [u, v, s, r] from the box; Joseph form keeps the
// covariance symmetric positive-definite.
KalmanState kalman_update(const KalmanState& state, const Box& box,
                          const KalmanConfig& cfg = {});

// The box the state describes: w = sqrt(s * r), h = s / w.
Box kalman_state_box(const KalmanState& state);

Vec4 box_to_measurement(const Box& box);

}  // namespace motrack
