#include "fnav/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <limits>
#include <sstream>
#include <memory>

namespace fnav {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPose: return "InvalidPose";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GoalAbsent: return "GoalAbsent";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NoHistory: return "NoHistory";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::ControllerStuck: return "ControllerStuck";
    case ErrorCode::TooManyChoices: return "TooManyChoices";
    case ErrorCode::EndpointError: return "EndpointError";
    case ErrorCode::InvalidChoice: return "InvalidChoice";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyBenchmark: return "EmptyBenchmark";
    case ErrorCode::SkippedTrajectory: return "SkippedTrajectory";
  }
  return "Unknown";
}

double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double signed_degrees(double deg) {
  double r = normalize_degrees(deg);
  if (r > 180.0) r -= 360.0;
  return r;
}

Vec2 heading_vector(double heading_deg) {
  // Exact values on the axes keep axis-aligned motion free of 1e-17 drift.
  const double h = normalize_degrees(heading_deg);
  if (h == 0.0) return {1.0, 0.0};
  if (h == 90.0) return {0.0, 1.0};
  if (h == 180.0) return {-1.0, 0.0};
  if (h == 270.0) return {0.0, -1.0};
  const double r = deg_to_rad(h);
  return {std::cos(r), std::sin(r)};
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error(ErrorCode::IoError, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_index over an empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

}  // namespace fnav
