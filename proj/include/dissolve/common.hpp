#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dissolve {

/// Base class for every runtime failure raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step exceeded the CFL bound dt * max|v| <= dx.
class CflViolation : public Error {
 public:
  using Error::Error;
};

/// The zero level set came within the guard band of the grid boundary.
class PaddingViolation : public Error {
 public:
  using Error::Error;
};

enum class Regime { dissolution, recrystallization };

inline const char* to_string(Regime r) {
  return r == Regime::dissolution ? "dissolution" : "recrystallization";
}

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

}  // namespace dissolve
