#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fnav {

/// Failure categories surfaced by the library. Every thrown fnav::Error carries one.
enum class ErrorCode {
  InvalidPose,
  InvalidArgument,
  GoalAbsent,
  GenerationFailed,
  SamplingFailed,
  GridMismatch,
  NoHistory,
  Unreachable,
  ControllerStuck,
  TooManyChoices,
  EndpointError,
  InvalidChoice,
  Timeout,
  IoError,
  ParseError,
  EmptyBenchmark,
  SkippedTrajectory,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, 360).
double normalize_degrees(double deg);

/// Wraps an angle into (-180, 180].
double signed_degrees(double deg);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
  /// Counterclockwise quarter turn.
  Vec2 perp() const { return {-y, x}; }
  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Unit vector for a heading in degrees (0 = +x, counterclockwise positive).
Vec2 heading_vector(double heading_deg);

/// Grid index: col grows with world x, row grows with world y.
struct Cell {
  int col = 0;
  int row = 0;

  auto operator<=>(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.col)) << 32) |
                                      static_cast<std::uint32_t>(c.row));
  }
};

/// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// Whole-file read/write; failures raise IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// SplitMix64 finalizer; used to derive independent seeds from (seed, index) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Unbiased draw from [0, n) by rejection on raw engine output. Unlike the standard
/// distributions, the sequence is the same across standard library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// Fisher-Yates shuffle driven by uniform_index.
template <class T>
void stable_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

}  // namespace fnav
