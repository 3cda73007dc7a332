#include "cfia/pose.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cfia/error.hpp"

namespace cfia {

double angle_between(Point2 origin_a, Point2 tip_a, Point2 origin_b, Point2 tip_b) {
  const double ax = tip_a.x - origin_a.x;
  const double ay = tip_a.y - origin_a.y;
  const double bx = tip_b.x - origin_b.x;
  const double by = tip_b.y - origin_b.y;
  const double na = std::hypot(ax, ay);
  const double nb = std::hypot(bx, by);
  if (!(na > 0.0) || !(nb > 0.0))
    throw ValidationError("degenerate landmarks: zero-length vector");
  const double dot = (ax / na) * (bx / nb) + (ay / na) * (by / nb);
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

void validate_landmarks(const LandmarkSet5& lm) {
  static constexpr std::array<const char*, 5> names = {
      "left eye", "right eye", "nose", "left mouth", "right mouth"};
  const std::array<Point2, 5> pts = {lm.left_eye, lm.right_eye, lm.nose,
                                     lm.left_mouth, lm.right_mouth};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
      throw ValidationError(std::string("degenerate landmarks: ") + names[i] +
                            " is not finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (pts[i].x == pts[j].x && pts[i].y == pts[j].y)
        throw ValidationError(std::string("degenerate landmarks: ") + names[i] +
                              " coincides with " + names[j]);
    }
  }
}

double pose_angle_difference(const LandmarkSet5& lm) {
  validate_landmarks(lm);
  const double theta1 = angle_between(lm.left_eye, lm.nose, lm.left_mouth, lm.nose);
  const double theta2 = angle_between(lm.nose, lm.right_eye, lm.nose, lm.right_mouth);
  return std::abs(theta1 - theta2);
}

bool is_frontal(const LandmarkSet5& lm, double tau) {
  if (!(tau > 0.0))
    throw ValidationError("pose tolerance must be positive, got " + std::to_string(tau));
  return pose_angle_difference(lm) <= tau;
}

}  // namespace cfia
