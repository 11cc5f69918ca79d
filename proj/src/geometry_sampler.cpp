#include "phdim/geometry_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phdim/errors.hpp"

namespace phdim {

namespace {

constexpr std::array<std::pair<Shape, std::string_view>, 13> kShapeNames{{
    {Shape::disk, "disk"},
    {Shape::square, "square"},
    {Shape::triangle, "triangle"},
    {Shape::cube, "cube"},
    {Shape::torus, "torus"},
    {Shape::interval, "interval"},
    {Shape::beta_square, "beta_square"},
    {Shape::cantor_set, "cantor_set"},
    {Shape::cantor_cross_interval, "cantor_cross_interval"},
    {Shape::cantor_dust_2d, "cantor_dust_2d"},
    {Shape::cantor_dust_3d, "cantor_dust_3d"},
    {Shape::sierpinski, "sierpinski"},
    {Shape::arrowhead, "arrowhead"},
}};

const double kSqrt3Over2 = std::sqrt(3.0) / 2.0;

// Cantor value of `depth` fresh random binary digits. Horner from the
// deepest digit keeps the sum accurate to the last bit.
double random_cantor(int depth, SeededRng& rng) {
  double x = 0.0;
  std::uint64_t word = 0;
  int bits_left = 0;
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(depth));
  for (auto& d : digits) {
    if (bits_left == 0) {
      word = rng.next();
      bits_left = 64;
    }
    d = static_cast<std::uint8_t>(word & 1U);
    word >>= 1;
    --bits_left;
  }
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = (x + 2.0 * *it) / 3.0;
  return x;
}

Point2 random_sierpinski(int depth, double delta, SeededRng& rng, std::vector<std::uint8_t>& buf) {
  buf.resize(static_cast<std::size_t>(depth));
  for (auto& d : buf) d = static_cast<std::uint8_t>(rng.uniform_int(3));
  return sierpinski_digit_point(buf, delta);
}

// Integer steps in the triangular lattice basis e0 = (1,0), e1 = (1/2, sqrt(3)/2).
constexpr std::array<std::array<long long, 2>, 6> kLatticeDir{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

struct Turtle {
  long long a = 0;
  long long b = 0;
  int dir = 0;
  int turn_sign = 1;
  bool below_axis = false;
  std::vector<std::array<long long, 2>>* out = nullptr;

  void forward() {
    a += kLatticeDir[static_cast<std::size_t>(dir)][0];
    b += kLatticeDir[static_cast<std::size_t>(dir)][1];
    if (b < 0) below_axis = true;
    if (out) out->push_back({a, b});
  }
  void turn(int sign) { dir = ((dir + sign * turn_sign) % 6 + 6) % 6; }

  // A -> B-A-B, B -> A+B+A
  void expand(bool is_a, int level) {
    if (level == 0) {
      forward();
      return;
    }
    const int sign = is_a ? -1 : +1;
    expand(!is_a, level - 1);
    turn(sign);
    expand(is_a, level - 1);
    turn(sign);
    expand(!is_a, level - 1);
  }
};

}  // namespace

std::string_view shape_name(Shape s) {
  for (const auto& [shape, name] : kShapeNames) {
    if (shape == s) return name;
  }
  return "unknown";
}

Shape shape_from_name(std::string_view name) {
  for (const auto& [shape, n] : kShapeNames) {
    if (n == name) return shape;
  }
  throw ParameterError("unknown shape '" + std::string(name) + "'");
}

void ShapeSpec::validate() const {
  switch (variant) {
    case Shape::torus:
      if (!(torus_minor > 0.0) || !(torus_major > torus_minor) || !std::isfinite(torus_major)) {
        throw ParameterError("torus: radii must satisfy R > r > 0");
      }
      break;
    case Shape::beta_square:
      if (!(beta_a > 0.0) || !(beta_b > 0.0) || !std::isfinite(beta_a) || !std::isfinite(beta_b)) {
        throw ParameterError("beta_square: shape parameters must be positive");
      }
      break;
    case Shape::sierpinski:
      if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ParameterError("sierpinski: separation must be >= 0");
      }
      break;
    case Shape::arrowhead:
      if (level < 0) throw ParameterError("arrowhead: level must be >= 0");
      if (level > kMaxArrowheadLevel) {
        throw ResourceError("arrowhead: level " + std::to_string(level) + " exceeds maximum " +
                            std::to_string(kMaxArrowheadLevel));
      }
      break;
    default:
      break;
  }
  switch (variant) {
    case Shape::cantor_set:
    case Shape::cantor_cross_interval:
    case Shape::cantor_dust_2d:
    case Shape::cantor_dust_3d:
    case Shape::sierpinski:
      if (digit_depth < 1) throw ParameterError("digit_depth must be positive");
      break;
    default:
      break;
  }
}

std::size_t ShapeSpec::ambient_dim() const {
  switch (variant) {
    case Shape::interval:
    case Shape::cantor_set:
      return 1;
    case Shape::cube:
    case Shape::torus:
    case Shape::cantor_dust_3d:
      return 3;
    default:
      return 2;
  }
}

std::string ShapeSpec::describe() const {
  std::ostringstream os;
  os << shape_name(variant);
  switch (variant) {
    case Shape::torus:
      os << "(R=" << torus_major << ",r=" << torus_minor << ")";
      break;
    case Shape::beta_square:
      os << "(a=" << beta_a << ",b=" << beta_b << ")";
      break;
    case Shape::sierpinski:
      os << "(delta=" << delta << ")";
      break;
    case Shape::arrowhead:
      os << "(level=" << level << ")";
      break;
    default:
      break;
  }
  return os.str();
}

double cantor_digit_point(std::span<const std::uint8_t> digits) {
  double x = 0.0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it > 1) throw ParameterError("cantor digit must be 0 or 1");
    x = (x + 2.0 * *it) / 3.0;
  }
  return x;
}

Point2 sierpinski_digit_point(std::span<const std::uint8_t> digits, double delta) {
  if (!(delta >= 0.0)) throw ParameterError("sierpinski: separation must be >= 0");
  const double ratio = 1.0 / (2.0 + delta);
  // summed from the leading digit so terms past double resolution round away
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  for (const auto d : digits) {
    w *= ratio;
    switch (d) {
      case 0:
        break;
      case 1:
        x += w;
        break;
      case 2:
        x += 0.5 * w;
        y += kSqrt3Over2 * w;
        break;
      default:
        throw ParameterError("sierpinski digit must be 0, 1 or 2");
    }
  }
  return {x, y};
}

std::vector<Point2> arrowhead_polyline(int level, int max_level) {
  if (level < 0) throw ParameterError("arrowhead: level must be >= 0");
  if (level > max_level) {
    throw ResourceError("arrowhead: level " + std::to_string(level) + " exceeds maximum " +
                        std::to_string(max_level) + " (3^level segments)");
  }
  const long long side = 1LL << level;

  // Pick the orientation that runs from (0,0) to (2^l, 0) above the axis.
  Turtle chosen;
  bool found = false;
  for (int sign : {1, -1}) {
    for (int d0 = 0; d0 < 6 && !found; ++d0) {
      Turtle t;
      t.dir = d0;
      t.turn_sign = sign;
      t.expand(true, level);
      if (t.a == side && t.b == 0 && !t.below_axis) {
        chosen = Turtle{};
        chosen.dir = d0;
        chosen.turn_sign = sign;
        found = true;
      }
    }
    if (found) break;
  }
  if (!found) throw std::logic_error("arrowhead: no orientation reaches (1,0)");

  std::vector<std::array<long long, 2>> lattice;
  lattice.reserve(static_cast<std::size_t>(std::pow(3.0, level)) + 1);
  lattice.push_back({0, 0});
  chosen.out = &lattice;
  chosen.expand(true, level);

  const double scale = 1.0 / static_cast<double>(side);
  std::vector<Point2> pts;
  pts.reserve(lattice.size());
  for (const auto& [a, b] : lattice) {
    pts.push_back({(static_cast<double>(a) + 0.5 * static_cast<double>(b)) * scale,
                   static_cast<double>(b) * kSqrt3Over2 * scale});
  }
  return pts;
}

PointCloud sample_polyline_uniform(std::span<const Point2> polyline, std::size_t n,
                                   SeededRng& rng) {
  if (polyline.empty()) throw ParameterError("polyline must be nonempty");
  if (n == 0) throw ParameterError("sample size must be positive");
  std::vector<double> coords;
  coords.reserve(2 * n);
  if (polyline.size() == 1) {
    for (std::size_t i = 0; i < n; ++i) coords.insert(coords.end(), polyline[0].begin(), polyline[0].end());
    return PointCloud(2, std::move(coords));
  }
  std::vector<double> cumulative(polyline.size() - 1);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    total += std::hypot(polyline[s + 1][0] - polyline[s][0], polyline[s + 1][1] - polyline[s][1]);
    cumulative[s] = total;
  }
  if (!(total > 0.0)) throw ParameterError("polyline has zero length");
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto s = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
    const double t = rng.uniform();
    const Point2& p = polyline[s];
    const Point2& q = polyline[s + 1];
    coords.push_back(p[0] + t * (q[0] - p[0]));
    coords.push_back(p[1] + t * (q[1] - p[1]));
  }
  return PointCloud(2, std::move(coords));
}

PointCloud sample(const ShapeSpec& spec, std::size_t n, SeededRng& rng) {
  spec.validate();
  if (n == 0) throw ParameterError("sample size must be positive");
  if (spec.variant == Shape::arrowhead) {
    const auto poly = arrowhead_polyline(spec.level);
    return sample_polyline_uniform(poly, n, rng);
  }

  const std::size_t m = spec.ambient_dim();
  std::vector<double> c;
  c.reserve(n * m);
  std::vector<std::uint8_t> digit_buf;
  const double two_pi = 2.0 * std::numbers::pi;

  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.variant) {
      case Shape::disk: {
        // unit area: radius 1/sqrt(pi), centred at the origin
        const double r = std::sqrt(rng.uniform() / std::numbers::pi);
        const double th = two_pi * rng.uniform();
        c.push_back(r * std::cos(th));
        c.push_back(r * std::sin(th));
        break;
      }
      case Shape::square:
        c.push_back(rng.uniform());
        c.push_back(rng.uniform());
        break;
      case Shape::triangle: {
        // equilateral, unit area: side 2 / 3^(1/4)
        const double side = 2.0 / std::pow(3.0, 0.25);
        double u = rng.uniform();
        double v = rng.uniform();
        if (u + v > 1.0) {
          u = 1.0 - u;
          v = 1.0 - v;
        }
        c.push_back(side * (u + 0.5 * v));
        c.push_back(side * kSqrt3Over2 * v);
        break;
      }
      case Shape::cube:
        c.push_back(rng.uniform());
        c.push_back(rng.uniform());
        c.push_back(rng.uniform());
        break;
      case Shape::torus: {
        // area element is proportional to R + r cos(phi): reject on the minor angle
        const double big = spec.torus_major;
        const double small = spec.torus_minor;
        double phi;
        do {
          phi = two_pi * rng.uniform();
        } while (rng.uniform() * (big + small) > big + small * std::cos(phi));
        const double theta = two_pi * rng.uniform();
        const double ring = big + small * std::cos(phi);
        c.push_back(ring * std::cos(theta));
        c.push_back(ring * std::sin(theta));
        c.push_back(small * std::sin(phi));
        break;
      }
      case Shape::interval:
        c.push_back(rng.uniform());
        break;
      case Shape::beta_square:
        c.push_back(rng.beta(spec.beta_a, spec.beta_b));
        c.push_back(rng.beta(spec.beta_a, spec.beta_b));
        break;
      case Shape::cantor_set:
        c.push_back(random_cantor(spec.digit_depth, rng));
        break;
      case Shape::cantor_cross_interval:
        c.push_back(random_cantor(spec.digit_depth, rng));
        c.push_back(rng.uniform());
        break;
      case Shape::cantor_dust_2d:
        c.push_back(random_cantor(spec.digit_depth, rng));
        c.push_back(random_cantor(spec.digit_depth, rng));
        break;
      case Shape::cantor_dust_3d:
        c.push_back(random_cantor(spec.digit_depth, rng));
        c.push_back(random_cantor(spec.digit_depth, rng));
        c.push_back(random_cantor(spec.digit_depth, rng));
        break;
      case Shape::sierpinski: {
        const Point2 p = random_sierpinski(spec.digit_depth, spec.delta, rng, digit_buf);
        c.push_back(p[0]);
        c.push_back(p[1]);
        break;
      }
      case Shape::arrowhead:
        break;
    }
  }
  return PointCloud(m, std::move(c));
}

}  // namespace phdim
