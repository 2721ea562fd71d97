#include "periodica/rational.hpp"

#include <stdexcept>

namespace periodica {

using boost::multiprecision::gcd;

Rat::Rat(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  BigInt g = gcd(num < 0 ? BigInt(-num) : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rat operator+(const Rat& a, const Rat& b) {
  return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rat operator-(const Rat& a, const Rat& b) {
  return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
}
Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num * b.num, a.den * b.den); }
Rat operator/(const Rat& a, const Rat& b) {
  if (b.num == 0) throw std::invalid_argument("rational division by zero");
  return Rat(a.num * b.den, a.den * b.num);
}
Rat Rat::operator-() const {
  Rat r;
  r.num = -num;
  r.den = den;
  return r;
}

std::string Rat::str() const {
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

Rat cross(const Pt& o, const Pt& p, const Pt& q) {
  return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
}

bool collinear(const Pt& o, const Pt& p, const Pt& q) {
  return cross(o, p, q).num == 0;
}

bool point_on_segment(const Pt& p, const Seg& s) {
  if (!collinear(s.a, s.b, p)) return false;
  Rat lox = s.a.x < s.b.x ? s.a.x : s.b.x;
  Rat hix = s.a.x < s.b.x ? s.b.x : s.a.x;
  Rat loy = s.a.y < s.b.y ? s.a.y : s.b.y;
  Rat hiy = s.a.y < s.b.y ? s.b.y : s.a.y;
  return lox <= p.x && p.x <= hix && loy <= p.y && p.y <= hiy;
}

namespace {

int sign(const Rat& r) { return r.num == 0 ? 0 : (r.num < 0 ? -1 : 1); }

bool is_endpoint_of(const Pt& p, const Seg& s) { return p == s.a || p == s.b; }

// Intersection point of two non-parallel lines through the segments.
Pt line_intersection(const Seg& s, const Seg& t) {
  // Solve s.a + u*(s.b-s.a) = t.a + v*(t.b-t.a).
  Pt r = s.b - s.a, q = t.b - t.a;
  Rat denom = r.x * q.y - r.y * q.x;
  Pt d = t.a - s.a;
  Rat u = (d.x * q.y - d.y * q.x) / denom;
  return {s.a.x + u * r.x, s.a.y + u * r.y};
}

}  // namespace

SegMeetResult classify_meeting(const Seg& s, const Seg& t) {
  // Degenerate point-segments: treat point as both endpoints.
  if (s.is_point() || t.is_point()) {
    const Seg& seg = s.is_point() ? t : s;
    const Pt& p = s.is_point() ? s.a : t.a;
    if (s.is_point() && t.is_point())
      return p == t.a ? SegMeetResult{SegMeet::kEndpointShared, p}
                      : SegMeetResult{SegMeet::kDisjoint, std::nullopt};
    if (!point_on_segment(p, seg)) return {SegMeet::kDisjoint, std::nullopt};
    return is_endpoint_of(p, seg)
               ? SegMeetResult{SegMeet::kEndpointShared, p}
               : SegMeetResult{SegMeet::kEndpointInterior, p};
  }

  Pt r = s.b - s.a, q = t.b - t.a;
  Rat denom = r.x * q.y - r.y * q.x;
  if (denom.num == 0) {
    // Parallel. Collinear overlap?
    if (!collinear(s.a, s.b, t.a)) return {SegMeet::kDisjoint, std::nullopt};
    // Collinear: project onto the dominant axis and compare intervals.
    auto key = [&](const Pt& p) { return r.x.num != 0 ? p.x : p.y; };
    Rat slo = key(s.a) < key(s.b) ? key(s.a) : key(s.b);
    Rat shi = key(s.a) < key(s.b) ? key(s.b) : key(s.a);
    Rat tlo = key(t.a) < key(t.b) ? key(t.a) : key(t.b);
    Rat thi = key(t.a) < key(t.b) ? key(t.b) : key(t.a);
    Rat lo = slo < tlo ? tlo : slo;
    Rat hi = shi < thi ? shi : thi;
    if (hi < lo) return {SegMeet::kDisjoint, std::nullopt};
    if (lo < hi) return {SegMeet::kOverlap, std::nullopt};
    // Single shared point; it is an endpoint of both (interval ends).
    Pt p = key(s.a) == lo ? s.a : s.b;
    return {SegMeet::kEndpointShared, p};
  }

  // Non-parallel: check whether the line intersection lies on both segments.
  int d1 = sign(cross(t.a, t.b, s.a));
  int d2 = sign(cross(t.a, t.b, s.b));
  int d3 = sign(cross(s.a, s.b, t.a));
  int d4 = sign(cross(s.a, s.b, t.b));
  if (d1 * d2 > 0 || d3 * d4 > 0) return {SegMeet::kDisjoint, std::nullopt};
  Pt p = line_intersection(s, t);
  bool s_end = is_endpoint_of(p, s);
  bool t_end = is_endpoint_of(p, t);
  if (s_end && t_end) return {SegMeet::kEndpointShared, p};
  if (s_end || t_end) return {SegMeet::kEndpointInterior, p};
  return {SegMeet::kProperCrossing, p};
}

}  // namespace periodica
