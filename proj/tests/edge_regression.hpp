#pragma once

// Frozen regression values of the 32 x 64 edge-state run (theta1 = pi/6,
// theta2 = -pi/2 | pi/2 along axis 0, T = 25, W = 5, coin (1, i)/sqrt(2)).
// Observed: minimum interface window probability 0.843, final axis-0 spread
// 4.82 with the boundary and 10.8 without it, final axis-1 spread about 17
// in both runs.
namespace edge_regression {
inline constexpr int kN1 = 32;
inline constexpr int kN2 = 64;
inline constexpr int kSteps = 25;
inline constexpr int kWindow = 5;
inline constexpr double kWindowFloor = 0.80;
inline constexpr double kBoundaryAxis0SpreadCeiling = 6.0;
inline constexpr double kControlAxis0SpreadFloor = 9.0;
inline constexpr double kAxis1SpreadFloor = 15.0;
}  // namespace edge_regression
