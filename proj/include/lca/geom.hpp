#ifndef LCA_GEOM_HPP
#define LCA_GEOM_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace lca {

using Rational = boost::rational<int64_t>;

struct RatPoint {
  Rational x, y;
  friend bool operator==(const RatPoint&, const RatPoint&) = default;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational cross(const RatPoint& o, const RatPoint& a, const RatPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

struct HalfLine {
  RatPoint direction;
};

struct Segment {
  RatPoint a, b;
};

struct Triangle {
  std::array<RatPoint, 3> v;

  Triangle(RatPoint a, RatPoint b, RatPoint c) : v{a, b, c} {
    if (cross(a, b, c) == Rational(0)) throw std::invalid_argument("degenerate triangle");
  }

  bool strictly_inside(const RatPoint& q) const {
    // mixed rational/int comparisons recurse forever under C++20 rewritten operators
    const Rational zero(0);
    Rational c0 = cross(v[0], v[1], q), c1 = cross(v[1], v[2], q), c2 = cross(v[2], v[0], q);
    return (c0 > zero && c1 > zero && c2 > zero) || (c0 < zero && c1 < zero && c2 < zero);
  }

  Triangle scaled(const Rational& s) const {
    auto f = [&](const RatPoint& p) { return RatPoint{p.x * s, p.y * s}; };
    return Triangle(f(v[0]), f(v[1]), f(v[2]));
  }

  Triangle mirrored() const {
    auto f = [](const RatPoint& p) { return RatPoint{-p.x, p.y}; };
    return Triangle(f(v[0]), f(v[1]), f(v[2]));
  }

  // Lattice points strictly inside.
  std::vector<std::pair<int64_t, int64_t>> interior_lattice_points() const {
    Rational xlo = v[0].x, xhi = v[0].x, ylo = v[0].y, yhi = v[0].y;
    for (auto& p : v) {
      xlo = std::min(xlo, p.x);
      xhi = std::max(xhi, p.x);
      ylo = std::min(ylo, p.y);
      yhi = std::max(yhi, p.y);
    }
    std::vector<std::pair<int64_t, int64_t>> out;
    for (int64_t b = boost::rational_cast<int64_t>(ylo) - 1; b <= boost::rational_cast<int64_t>(yhi) + 1; ++b)
      for (int64_t a = boost::rational_cast<int64_t>(xlo) - 1; a <= boost::rational_cast<int64_t>(xhi) + 1; ++a)
        if (strictly_inside({Rational(a), Rational(b)})) out.push_back({a, b});
    return out;
  }
};

using GeomFeature = std::variant<HalfLine, Segment, Triangle>;

}  // namespace lca

#endif
