#include "localgap/types.hpp"

#include "localgap/errors.hpp"

namespace localgap {

WaveVector::WaveVector(double kx, double ky, double kz) : WaveVector(Eigen::Vector3d(kx, ky, kz)) {}

WaveVector::WaveVector(const Eigen::Vector3d& v) : v_(v) {
  if (!v_.allFinite()) throw DomainError("wave vector has non-finite components");
}

LatticeShift::LatticeShift(std::int64_t m1, std::int64_t m2, std::int64_t m3) : m_{m1, m2, m3} {
  if (m1 == 0 && m2 == 0 && m3 == 0) throw DomainError("lattice shift must be nonzero");
}

std::ostream& operator<<(std::ostream& os, const WaveVector& k) {
  return os << '(' << k[0] << ", " << k[1] << ", " << k[2] << ')';
}

std::ostream& operator<<(std::ostream& os, const LatticeShift& m) {
  return os << '(' << m[0] << ", " << m[1] << ", " << m[2] << ')';
}

}  // namespace localgap
