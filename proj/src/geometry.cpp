#include "nprev/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "nprev/errors.hpp"

namespace nprev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

Point rotate(const Point& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Point perp_left(const Point& v) { return {-v.y(), v.x()}; }

double wrap_parameter(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

CurvePoint eval_circle(const Circle& c, double t) {
  const double ct = std::cos(t), st = std::sin(t);
  return {{c.center_x + c.radius * ct, c.center_height + c.radius * st},
          {-c.radius * st, c.radius * ct},
          {-c.radius * ct, -c.radius * st}};
}

CurvePoint eval_ellipse(const Ellipse& e, double t) {
  const double ct = std::cos(t), st = std::sin(t);
  return {{e.center_x + e.semi_x * ct, e.center_height + e.semi_y * st},
          {-e.semi_x * st, e.semi_y * ct},
          {-e.semi_x * ct, -e.semi_y * st}};
}

// Radius function and its first two derivatives.
struct Radial {
  double r, dr, ddr;
};

Radial star_radius(const FourierStar& s, double t) {
  double r = 1, dr = 0, ddr = 0;
  for (std::size_t i = 0; i < s.cos_coeffs.size(); ++i) {
    const double k = double(i + 1);
    r += s.cos_coeffs[i] * std::cos(k * t);
    dr -= s.cos_coeffs[i] * k * std::sin(k * t);
    ddr -= s.cos_coeffs[i] * k * k * std::cos(k * t);
  }
  for (std::size_t i = 0; i < s.sin_coeffs.size(); ++i) {
    const double k = double(i + 1);
    r += s.sin_coeffs[i] * std::sin(k * t);
    dr += s.sin_coeffs[i] * k * std::cos(k * t);
    ddr -= s.sin_coeffs[i] * k * k * std::sin(k * t);
  }
  if (s.rough_amplitude != 0) {
    // h(t) = |sin t|^{1+a}
    const double a = s.rough_alpha;
    const double st = std::sin(t), ct = std::cos(t);
    const double as = std::abs(st);
    const double sg = st > 0 ? 1.0 : (st < 0 ? -1.0 : 0.0);
    r += s.rough_amplitude * std::pow(as, 1 + a);
    dr += s.rough_amplitude * (1 + a) * std::pow(as, a) * sg * ct;
    if (as > 0) {
      ddr += s.rough_amplitude * (1 + a) * (a * std::pow(as, a - 1) * ct * ct - std::pow(as, a + 1));
    }
  }
  return {s.base_radius * r, s.base_radius * dr, s.base_radius * ddr};
}

CurvePoint eval_star(const FourierStar& s, double t) {
  const Radial R = star_radius(s, t);
  const double ct = std::cos(t), st = std::sin(t);
  return {{s.center_x + R.r * ct, s.center_height + R.r * st},
          {R.dr * ct - R.r * st, R.dr * st + R.r * ct},
          {R.ddr * ct - 2 * R.dr * st - R.r * ct, R.ddr * st + 2 * R.dr * ct - R.r * st}};
}

// Edge e parametrized by u in [0, 1] with constant speed.
struct EdgeGeometry {
  Point start;
  Point chord_dir;  // unit chord
  double chord;
  double turn;       // total tangent turning along the edge
  double arclength;  // length of the edge
};

EdgeGeometry edge_geometry(const CurvilinearPolygon& p, int e) {
  const int m = static_cast<int>(p.vertices.size());
  const Point a = p.vertices[e];
  const Point b = p.vertices[(e + 1) % m];
  EdgeGeometry g;
  g.start = a;
  g.chord = (b - a).norm();
  g.chord_dir = (b - a) / g.chord;
  g.turn = p.arc_angles.empty() ? 0.0 : p.arc_angles[e];
  g.arclength = std::abs(g.turn) < 1e-14 ? g.chord : g.chord * (g.turn / 2) / std::sin(g.turn / 2);
  return g;
}

// Position, du-derivative, du^2-derivative on an edge.
CurvePoint eval_edge(const EdgeGeometry& g, double u) {
  if (std::abs(g.turn) < 1e-14) {
    return {g.start + u * g.chord * g.chord_dir, g.chord * g.chord_dir, Point::Zero()};
  }
  const double phi0 = -g.turn / 2;
  const double phi = phi0 + g.turn * u;
  const Point tau = rotate(g.chord_dir, phi);
  const double radius = g.arclength / g.turn;  // signed
  // integral of S * tau(u) du = radius * (J tau(u) - J tau(0)), J = rotate(-pi/2)
  const Point j_now{tau.y(), -tau.x()};
  const Point tau0 = rotate(g.chord_dir, phi0);
  const Point j_start{tau0.y(), -tau0.x()};
  return {g.start + radius * (j_now - j_start), g.arclength * tau, g.arclength * g.turn * perp_left(tau)};
}

CurvePoint eval_polygon(const CurvilinearPolygon& p, double t) {
  const int m = static_cast<int>(p.vertices.size());
  const double piece = kTwoPi / m;
  int e = static_cast<int>(std::floor(t / piece));
  if (e >= m) e = m - 1;
  const double u = (t - e * piece) / piece;
  const CurvePoint local = eval_edge(edge_geometry(p, e), u);
  const double du_dt = 1.0 / piece;
  return {local.pos, local.d1 * du_dt, local.d2 * du_dt * du_dt};
}

void append_fmt(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
  out += buf;
}

// Kress sigmoidal grading on [0, 1] with exponent q; returns (u, du/dsigma).
std::pair<double, double> graded_map(double sigma, int q) {
  const double s = kTwoPi * sigma;
  auto v = [q](double x) {
    const double c = 1.0 / q - 0.5;
    const double y = (kPi - x) / kPi;
    return c * y * y * y + (1.0 / q) * (x - kPi) / kPi + 0.5;
  };
  auto dv = [q](double x) {
    const double c = 1.0 / q - 0.5;
    const double y = (kPi - x) / kPi;
    return -3 * c * y * y / kPi + 1.0 / (q * kPi);
  };
  const double va = v(s), vb = v(kTwoPi - s);
  const double A = std::pow(va, q), B = std::pow(vb, q);
  const double dA = q * std::pow(va, q - 1) * dv(s);
  const double dB = -q * std::pow(vb, q - 1) * dv(kTwoPi - s);
  const double W = A / (A + B);
  const double dW = (dA * B - A * dB) / ((A + B) * (A + B));
  return {W, kTwoPi * dW};
}

CurveSample make_sample(const GeneratingCurve& curve, double t, double weight, int segment) {
  const CurvePoint cp = curve.evaluate(t);
  CurveSample s;
  s.t = t;
  s.pos = cp.pos;
  s.speed = cp.d1.norm();
  s.tangent = cp.d1 / s.speed;
  s.normal = Point(s.tangent.y(), -s.tangent.x());
  s.v_p = -s.normal.y();
  s.weight = weight;
  s.curvature = (cp.d1.x() * cp.d2.y() - cp.d1.y() * cp.d2.x()) / (s.speed * s.speed * s.speed);
  s.segment = segment;
  return s;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto orient = [](const Point& p, const Point& q, const Point& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

}  // namespace

GeneratingCurve GeneratingCurve::circle(double center_height, double radius, double center_x) {
  return {Circle{center_height, radius, center_x}, Regularity::smooth, 0.0};
}

GeneratingCurve GeneratingCurve::ellipse(double center_height, double semi_x, double semi_y, double center_x) {
  return {Ellipse{center_height, semi_x, semi_y, center_x}, Regularity::smooth, 0.0};
}

GeneratingCurve GeneratingCurve::fourier_star(FourierStar star) {
  if (star.rough_amplitude != 0 && star.rough_alpha < 1) {
    const double a = star.rough_alpha;
    return {std::move(star), Regularity::c1alpha, a};
  }
  if (star.rough_amplitude != 0) {
    // |sin t|^{1+a} with a in [1, 2) is C^{2, a-1}
    const double a = star.rough_alpha - 1;
    return {std::move(star), a > 0 && a < 1 ? Regularity::c2alpha : Regularity::smooth, a};
  }
  return {std::move(star), Regularity::smooth, 0.0};
}

GeneratingCurve GeneratingCurve::polygon(CurvilinearPolygon poly) {
  if (poly.vertices.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (poly.arc_angles.empty()) poly.arc_angles.assign(poly.vertices.size(), 0.0);
  if (poly.arc_angles.size() != poly.vertices.size())
    throw GeometryError("polygon: arc_angles must have one entry per edge");
  return {std::move(poly), Regularity::lipschitz_with_corners, 0.0};
}

GeneratingCurve GeneratingCurve::square(double center_height, double side, double center_x) {
  const double h = side / 2;
  CurvilinearPolygon p;
  p.vertices = {{center_x - h, center_height - h},
                {center_x + h, center_height - h},
                {center_x + h, center_height + h},
                {center_x - h, center_height + h}};
  return polygon(std::move(p));
}

CurvePoint GeneratingCurve::evaluate(double t) const {
  const double w = wrap_parameter(t);
  return std::visit(
      [w](const auto& s) -> CurvePoint {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) return eval_circle(s, w);
        else if constexpr (std::is_same_v<T, Ellipse>) return eval_ellipse(s, w);
        else if constexpr (std::is_same_v<T, FourierStar>) return eval_star(s, w);
        else return eval_polygon(s, w);
      },
      shape_);
}

int GeneratingCurve::segment_count() const {
  if (const auto* p = std::get_if<CurvilinearPolygon>(&shape_)) return static_cast<int>(p->vertices.size());
  return 1;
}

std::vector<double> GeneratingCurve::corner_parameters() const {
  std::vector<double> out;
  if (!has_corners()) return out;
  const int m = segment_count();
  for (int e = 0; e < m; ++e) out.push_back(kTwoPi * e / m);
  return out;
}

std::vector<double> GeneratingCurve::interior_angles() const {
  std::vector<double> out;
  const auto* p = std::get_if<CurvilinearPolygon>(&shape_);
  if (!p) return out;
  const int m = static_cast<int>(p->vertices.size());
  for (int e = 0; e < m; ++e) {
    const int prev = (e + m - 1) % m;
    const EdgeGeometry gin = edge_geometry(*p, prev);
    const EdgeGeometry gout = edge_geometry(*p, e);
    const Point tin = rotate(gin.chord_dir, gin.turn / 2);
    const Point tout = rotate(gout.chord_dir, -gout.turn / 2);
    const double turning = std::atan2(tin.x() * tout.y() - tin.y() * tout.x(), tin.dot(tout));
    out.push_back(kPi - turning);
  }
  return out;
}

void GeneratingCurve::validate() const {
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (!(c->radius > 0)) throw GeometryError("circle: radius must be positive");
    if (!(c->center_height > c->radius)) throw GeometryError("curve touches or crosses the rotation axis (min y <= 0)");
  } else if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    if (!(e->semi_x > 0 && e->semi_y > 0)) throw GeometryError("ellipse: semi-axes must be positive");
    if (!(e->center_height > e->semi_y)) throw GeometryError("curve touches or crosses the rotation axis (min y <= 0)");
  } else if (const auto* s = std::get_if<FourierStar>(&shape_)) {
    if (!(s->base_radius > 0)) throw GeometryError("fourier_star: base_radius must be positive");
    if (s->rough_amplitude != 0 && !(s->rough_alpha > 0))
      throw GeometryError("fourier_star: rough_alpha must be positive");
  }

  constexpr int m = 1024;
  std::vector<Point> poly;
  poly.reserve(m);
  double area2 = 0;
  double min_y = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const CurvePoint cp = evaluate(kTwoPi * (i + 0.5) / m);
    if (cp.d1.norm() <= 0) throw GeometryError("curve has a stationary point");
    poly.push_back(cp.pos);
    min_y = std::min(min_y, cp.pos.y());
  }
  for (double t : corner_parameters()) min_y = std::min(min_y, evaluate(t).pos.y());
  if (!(min_y > 0)) throw GeometryError("curve touches or crosses the rotation axis (min y <= 0)");
  for (int i = 0; i < m; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % m];
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  if (!(area2 > 0)) throw GeometryError("curve is not positively oriented");
  for (int i = 0; i < m; ++i) {
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m]))
        throw GeometryError("curve self-intersects");
    }
  }
}

GeneratingCurve GeneratingCurve::dilated(double factor) const {
  GeneratingCurve out = *this;
  std::visit(
      [factor](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          s.center_height *= factor;
          s.radius *= factor;
          s.center_x *= factor;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          s.center_height *= factor;
          s.semi_x *= factor;
          s.semi_y *= factor;
          s.center_x *= factor;
        } else if constexpr (std::is_same_v<T, FourierStar>) {
          s.center_height *= factor;
          s.base_radius *= factor;
          s.center_x *= factor;
        } else {
          for (auto& v : s.vertices) v *= factor;
        }
      },
      out.shape_);
  return out;
}

std::string GeneratingCurve::label() const {
  std::string out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          out = "circle;";
          append_fmt(out, "center_x", s.center_x);
          append_fmt(out, "center_height", s.center_height);
          append_fmt(out, "radius", s.radius);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          out = "ellipse;";
          append_fmt(out, "center_x", s.center_x);
          append_fmt(out, "center_height", s.center_height);
          append_fmt(out, "semi_x", s.semi_x);
          append_fmt(out, "semi_y", s.semi_y);
        } else if constexpr (std::is_same_v<T, FourierStar>) {
          out = "fourier_star;";
          append_fmt(out, "center_x", s.center_x);
          append_fmt(out, "center_height", s.center_height);
          append_fmt(out, "base_radius", s.base_radius);
          for (double a : s.cos_coeffs) append_fmt(out, "a", a);
          for (double b : s.sin_coeffs) append_fmt(out, "b", b);
          append_fmt(out, "rough_amplitude", s.rough_amplitude);
          append_fmt(out, "rough_alpha", s.rough_alpha);
        } else {
          out = "curvilinear_polygon;";
          for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            append_fmt(out, "x", s.vertices[i].x());
            append_fmt(out, "y", s.vertices[i].y());
            append_fmt(out, "turn", s.arc_angles[i]);
          }
        }
      },
      shape_);
  return out;
}

std::uint64_t GeneratingCurve::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<CurveSample> sample_curve(const GeneratingCurve& curve, int n, int grading_exponent) {
  if (n < 8 || n % 2 != 0) throw DomainError("sample_curve: n must be even and >= 8");
  curve.validate();
  std::vector<CurveSample> out;
  out.reserve(n);
  if (!curve.has_corners()) {
    const double h = kTwoPi / n;
    const double offset = curve.regularity() == Regularity::c1alpha ? 0.5 : 0.0;
    for (int j = 0; j < n; ++j) out.push_back(make_sample(curve, h * (j + offset), h, 0));
    return out;
  }
  const int edges = curve.segment_count();
  if (n % edges != 0) throw DomainError("sample_curve: n must be a multiple of the polygon edge count");
  if (grading_exponent < 2) throw DomainError("sample_curve: grading exponent must be >= 2");
  const int per_edge = n / edges;
  const double piece = kTwoPi / edges;
  for (int e = 0; e < edges; ++e) {
    for (int j = 0; j < per_edge; ++j) {
      const auto [u, du] = graded_map((j + 0.5) / per_edge, grading_exponent);
      out.push_back(make_sample(curve, piece * (e + u), piece * du / per_edge, e));
    }
  }
  return out;
}

double delta(const Point& p, const Point& q) {
  if (!(p.y() > 0 && q.y() > 0)) throw DomainError("delta: both points need y > 0");
  return (p - q).norm() / (2 * std::sqrt(p.y() * q.y()));
}

double hyperbolic_area_over_4pi(const GeneratingCurve& curve, int n) {
  const auto samples = sample_curve(curve, n);
  double sum = 0;
  for (const auto& s : samples) sum += s.weight * s.speed * s.tangent.x() / s.pos.y();
  return sum / (4 * kPi);
}

double sampled_length(const std::vector<CurveSample>& samples) {
  double len = 0;
  for (const auto& s : samples) len += s.weight * s.speed;
  return len;
}

}  // namespace nprev
