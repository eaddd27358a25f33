#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace nprev {

using Point = Eigen::Vector2d;

enum class Regularity { smooth, c1alpha, c2alpha, lipschitz_with_corners };

/// Circle of radius `radius` centred at (center_x, center_height).
struct Circle {
  double center_height;
  double radius;
  double center_x = 0.0;
};

struct Ellipse {
  double center_height;
  double semi_x;
  double semi_y;
  double center_x = 0.0;
};

/// Star-shaped curve r(t) = base_radius * (1 + sum_k a_k cos kt + b_k sin kt
/// + rough_amplitude * |sin t|^{1 + rough_alpha}) around the centre.
/// cos_coeffs[k-1] = a_k, sin_coeffs[k-1] = b_k. A non-zero rough_amplitude
/// with rough_alpha in (0, 1) produces a C^{1,alpha} boundary.
struct FourierStar {
  double center_height;
  double base_radius;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double rough_amplitude = 0.0;
  double rough_alpha = 1.0;
  double center_x = 0.0;
};

/// Counter-clockwise polygon whose edge e runs from vertices[e] to
/// vertices[e+1]. arc_angles[e] is the signed tangent turning along edge e
/// (0 = straight segment, > 0 = circular arc bulging outward).
struct CurvilinearPolygon {
  std::vector<Point> vertices;
  std::vector<double> arc_angles;
};

using CurveShape = std::variant<Circle, Ellipse, FourierStar, CurvilinearPolygon>;

/// Position and parameter derivatives of p(t).
struct CurvePoint {
  Point pos;
  Point d1;
  Point d2;
};

/// Closed, positively oriented generating curve in the half-plane y > 0.
class GeneratingCurve {
 public:
  static GeneratingCurve circle(double center_height, double radius, double center_x = 0.0);
  static GeneratingCurve ellipse(double center_height, double semi_x, double semi_y, double center_x = 0.0);
  static GeneratingCurve fourier_star(FourierStar star);
  static GeneratingCurve polygon(CurvilinearPolygon poly);
  /// Axis-aligned square of side `side` centred at (center_x, center_height).
  static GeneratingCurve square(double center_height, double side, double center_x = 0.0);

  const CurveShape& shape() const { return shape_; }
  Regularity regularity() const { return regularity_; }
  /// Hoelder exponent for c1alpha / c2alpha curves.
  double alpha() const { return alpha_; }

  CurvePoint evaluate(double t) const;

  /// Number of smooth pieces the parameter interval is split into
  /// (1 for smooth curves, the edge count for polygons).
  int segment_count() const;
  /// Parameter values where smooth pieces meet (empty for smooth curves).
  std::vector<double> corner_parameters() const;
  /// Interior angles at the corners, in (0, 2 pi).
  std::vector<double> interior_angles() const;

  bool has_corners() const { return regularity_ == Regularity::lipschitz_with_corners; }

  /// Throws GeometryError when the curve touches the axis, self-intersects,
  /// or is negatively oriented.
  void validate() const;

  /// Same curve scaled by `factor` about the origin (the rotation axis stays fixed).
  GeneratingCurve dilated(double factor) const;

  std::string label() const;
  /// Stable 64-bit hash of the parameter set.
  std::uint64_t fingerprint() const;

 private:
  GeneratingCurve(CurveShape shape, Regularity reg, double alpha)
      : shape_(std::move(shape)), regularity_(reg), alpha_(alpha) {}

  CurveShape shape_;
  Regularity regularity_;
  double alpha_;
};

/// Quadrature node on the generating curve.
struct CurveSample {
  double t = 0.0;
  Point pos = Point::Zero();
  Point tangent = Point::Zero();  // unit, positive orientation
  Point normal = Point::Zero();   // outward unit normal
  double v_p = 0.0;               // -normal.y() == tangent.x()
  double speed = 0.0;             // |dp/dt|
  double weight = 0.0;            // parameter-space weight; weight*speed is the arclength weight
  double curvature = 0.0;         // signed, > 0 where the curve turns left
  int segment = 0;
};

inline constexpr int kDefaultGradingExponent = 3;

/// Nystroem grid of `n` nodes. Smooth curves use t_j = 2 pi j / n;
/// c1alpha curves shift by half a step; corner curves use a graded mesh
/// per edge (n must be a multiple of the edge count).
std::vector<CurveSample> sample_curve(const GeneratingCurve& curve, int n,
                                      int grading_exponent = kDefaultGradingExponent);

/// Scale-invariant separation |p - q| / (2 sqrt(y_p y_q)).
double delta(const Point& p, const Point& q);

/// (1/4 pi) times the hyperbolic area of the enclosed domain, (1/4 pi) oint dx / y.
double hyperbolic_area_over_4pi(const GeneratingCurve& curve, int n);

/// Total arclength from a sampled grid.
double sampled_length(const std::vector<CurveSample>& samples);

}  // namespace nprev
