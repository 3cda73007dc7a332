#pragma once

#include <numbers>

namespace cfia {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Five-point landmark layout: eyes, nose tip, mouth corners.
struct LandmarkSet5 {
  Point2 left_eye;
  Point2 right_eye;
  Point2 nose;
  Point2 left_mouth;
  Point2 right_mouth;
};

// 3 degrees.
inline constexpr double kDefaultPoseTau = 3.0 * std::numbers::pi / 180.0;

// Angle in [0, pi] between (tip_a - origin_a) and (tip_b - origin_b).
// Throws ValidationError for a zero-length vector.
double angle_between(Point2 origin_a, Point2 tip_a, Point2 origin_b, Point2 tip_b);

// Throws ValidationError if a point is non-finite or two points coincide.
void validate_landmarks(const LandmarkSet5& lm);

// |theta1 - theta2| where theta1 is the angle between LE->N and LM->N and
// theta2 the angle between N->RE and N->RM.
double pose_angle_difference(const LandmarkSet5& lm);

bool is_frontal(const LandmarkSet5& lm, double tau = kDefaultPoseTau);

}  // namespace cfia
