#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace pyragas {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;
template <typename Scalar>
inline constexpr Scalar two_pi_v = 2 * std::numbers::pi_v<Scalar>;

/// e^{i angle}. Unlike std::polar this accepts any real multiplier afterwards,
/// including negative gains.
template <typename Scalar>
inline std::complex<Scalar> unit_phase(Scalar angle) {
  using std::cos;
  using std::sin;
  return {cos(angle), sin(angle)};
}

template <typename Scalar>
inline constexpr std::complex<Scalar> imag_unit{Scalar(0), Scalar(1)};

// Error taxonomy. Every failure the library reports derives from Error so the
// CLI can map them onto exit codes with a single catch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PYRAGAS_DEFINE_ERROR(Name)             \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

PYRAGAS_DEFINE_ERROR(DomainError);
PYRAGAS_DEFINE_ERROR(DenominatorZero);
PYRAGAS_DEFINE_ERROR(StepUnderflow);
PYRAGAS_DEFINE_ERROR(UndefinedPhase);
PYRAGAS_DEFINE_ERROR(BoundaryRoot);
PYRAGAS_DEFINE_ERROR(NonIntegerWinding);
PYRAGAS_DEFINE_ERROR(CountMismatch);
PYRAGAS_DEFINE_ERROR(ContinuationBreakdown);
PYRAGAS_DEFINE_ERROR(SimplicityViolation);
PYRAGAS_DEFINE_ERROR(DegenerateTransversality);
PYRAGAS_DEFINE_ERROR(BoundaryCase);

#undef PYRAGAS_DEFINE_ERROR

}  // namespace pyragas
