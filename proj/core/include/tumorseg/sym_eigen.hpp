#ifndef TUMORSEG_SYM_EIGEN_HPP
#define TUMORSEG_SYM_EIGEN_HPP

#include <array>

namespace tumorseg {

using Mat4 = std::array<std::array<double, 4>, 4>;

// Eigenvalues sorted descending; eigenvectors[k] is the unit eigenvector
// for eigenvalues[k]. Sign convention: the first largest-magnitude
// component of each vector is non-negative.
struct EigenResult4 {
  std::array<double, 4> eigenvalues{};
  std::array<std::array<double, 4>, 4> eigenvectors{};
};

// Cyclic Jacobi rotations on a symmetric 4x4 matrix. Sweeps until every
// off-diagonal magnitude drops below 1e-12 or 100 sweeps have run.
// Input must be symmetric to within 1e-9 (ValidationError otherwise).
EigenResult4 symmetric_eigen_4(const Mat4& matrix);

}  // namespace tumorseg

#endif
