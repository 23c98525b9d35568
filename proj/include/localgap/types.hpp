#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>

#include <Eigen/Core>

namespace localgap {

/// Volume |Π| of the periodicity cell [-π, π]³.
inline constexpr double kCellVolume = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

/// Bloch vector in reciprocal-lattice units (the reciprocal lattice of the cell is ℤ³).
class WaveVector {
 public:
  WaveVector() = default;
  WaveVector(double kx, double ky, double kz);
  explicit WaveVector(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vec() const noexcept { return v_; }
  double operator[](int i) const { return v_[i]; }
  double norm() const { return v_.norm(); }
  double squared_norm() const { return v_.squaredNorm(); }
  bool is_zero() const { return v_.squaredNorm() == 0.0; }

  /// The point (1 + delta) k on the ray through this vector.
  WaveVector scaled(double factor) const { return WaveVector(factor * v_); }

  friend bool operator==(const WaveVector& a, const WaveVector& b) { return a.v_ == b.v_; }

 private:
  Eigen::Vector3d v_ = Eigen::Vector3d::Zero();
};

/// Nonzero integer reciprocal-lattice vector m.
class LatticeShift {
 public:
  LatticeShift(std::int64_t m1, std::int64_t m2, std::int64_t m3);
  explicit LatticeShift(const std::array<std::int64_t, 3>& m) : LatticeShift(m[0], m[1], m[2]) {}

  std::int64_t operator[](int i) const { return m_[static_cast<std::size_t>(i)]; }
  const std::array<std::int64_t, 3>& components() const noexcept { return m_; }
  std::int64_t squared_norm() const { return m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2]; }
  double norm() const { return std::sqrt(static_cast<double>(squared_norm())); }
  Eigen::Vector3d vec() const {
    return {static_cast<double>(m_[0]), static_cast<double>(m_[1]), static_cast<double>(m_[2])};
  }

  friend bool operator==(const LatticeShift&, const LatticeShift&) = default;
  friend auto operator<=>(const LatticeShift&, const LatticeShift&) = default;

 private:
  std::array<std::int64_t, 3> m_;
};

std::ostream& operator<<(std::ostream& os, const WaveVector& k);
std::ostream& operator<<(std::ostream& os, const LatticeShift& m);

}  // namespace localgap
