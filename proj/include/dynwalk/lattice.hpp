#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>

namespace dynwalk {

// The four unit steps of simple random walk on Z^2.
enum class Direction : std::uint8_t { East = 0, West = 1, North = 2, South = 3 };

inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::East, Direction::West, Direction::North, Direction::South};

struct LatticePoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  constexpr LatticePoint& operator+=(const LatticePoint& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr LatticePoint& operator-=(const LatticePoint& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  friend constexpr LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend constexpr LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  friend constexpr LatticePoint operator-(const LatticePoint& a) { return {-a.x1, -a.x2}; }
  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;

  constexpr bool is_origin() const { return x1 == 0 && x2 == 0; }
  // Squared Euclidean norm; radii comparisons are done on squares to stay exact.
  constexpr std::int64_t norm2() const { return x1 * x1 + x2 * x2; }
  double norm() const;
};

inline std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
  return os << '(' << p.x1 << ',' << p.x2 << ')';
}

constexpr LatticePoint step_vector(Direction d) {
  switch (d) {
    case Direction::East: return {1, 0};
    case Direction::West: return {-1, 0};
    case Direction::North: return {0, 1};
    case Direction::South: return {0, -1};
  }
  return {0, 0};
}

// Low two bits select the direction.
constexpr Direction direction_from_bits(std::uint64_t bits) {
  return static_cast<Direction>(bits & 3u);
}

char direction_letter(Direction d);

}  // namespace dynwalk

template <>
struct std::hash<dynwalk::LatticePoint> {
  std::size_t operator()(const dynwalk::LatticePoint& p) const noexcept {
    auto h = static_cast<std::uint64_t>(p.x1) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(p.x2) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
