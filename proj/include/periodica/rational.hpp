// Exact rational arithmetic and 2D segment predicates for drawings.
// All geometric predicates are exact (arbitrary-precision integers); no
// floating point anywhere in the drawing pipeline.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace periodica {

using BigInt = boost::multiprecision::cpp_int;

struct Rat {
  BigInt num = 0;
  BigInt den = 1;  // always > 0, gcd(num,den) = 1

  Rat() = default;
  Rat(long long n) : num(n) {}
  Rat(BigInt n, BigInt d);

  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);
  Rat operator-() const;
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  std::string str() const;
};

struct Pt {
  Rat x, y;
  friend Pt operator+(const Pt& a, const Pt& b) { return {a.x + b.x, a.y + b.y}; }
  friend Pt operator-(const Pt& a, const Pt& b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Pt& a, const Pt& b) { return !(a == b); }
  friend bool operator<(const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

// Closed segment between two (possibly equal) points.
struct Seg {
  Pt a, b;
  bool is_point() const { return a == b; }
  bool horizontal() const { return a.y == b.y && a.x != b.x; }
  bool vertical() const { return a.x == b.x && a.y != b.y; }
};

Rat cross(const Pt& o, const Pt& p, const Pt& q);  // (p-o) x (q-o)
bool collinear(const Pt& o, const Pt& p, const Pt& q);
bool point_on_segment(const Pt& p, const Seg& s);  // closed

// Classification of how two closed segments meet.
enum class SegMeet {
  kDisjoint,
  kEndpointShared,   // meet exactly at one point which is an endpoint of both
  kProperCrossing,   // interiors cross at one point
  kEndpointInterior, // one's endpoint lies in the other's interior
  kOverlap           // collinear with a common sub-segment (or shared ends + more)
};

struct SegMeetResult {
  SegMeet kind = SegMeet::kDisjoint;
  std::optional<Pt> point;  // defined for single-point meetings
};

SegMeetResult classify_meeting(const Seg& s, const Seg& t);

}  // namespace periodica
