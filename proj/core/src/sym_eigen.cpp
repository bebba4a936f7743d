#include "tumorseg/sym_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "tumorseg/error.hpp"

namespace tumorseg {
namespace {

double max_off_diagonal(const Mat4& a) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) m = std::max(m, std::fabs(a[i][j]));
  return m;
}

// One rotation in the (p, q) plane annihilating a[p][q].
void rotate_pq(Mat4& a, Mat4& v, int p, int q) {
  if (a[p][q] == 0.0) return;
  const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
  // Smaller-root tangent for numerical stability.
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
  a[p][p] = app - t * apq;
  a[q][q] = aqq + t * apq;
  a[p][q] = a[q][p] = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (i == p || i == q) continue;
    const double aip = a[i][p], aiq = a[i][q];
    a[i][p] = a[p][i] = aip - s * (aiq + tau * aip);
    a[i][q] = a[q][i] = aiq + s * (aip - tau * aiq);
  }
  for (int i = 0; i < 4; ++i) {
    const double vip = v[i][p], viq = v[i][q];
    v[i][p] = vip - s * (viq + tau * vip);
    v[i][q] = viq + s * (vip - tau * viq);
  }
}

}  // namespace

EigenResult4 symmetric_eigen_4(const Mat4& matrix) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::fabs(matrix[i][j] - matrix[j][i]) > 1e-9)
        throw ValidationError("symmetric_eigen_4: input not symmetric within 1e-9");

  // Work on the symmetrized copy so tiny asymmetries cannot bias sweeps.
  Mat4 a{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = 0.5 * (matrix[i][j] + matrix[j][i]);

  Mat4 v{};
  for (int i = 0; i < 4; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 100 && max_off_diagonal(a) >= 1e-12; ++sweep) {
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 4; ++q) rotate_pq(a, v, p, q);
  }

  std::array<int, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[i][i] > a[j][j]; });

  EigenResult4 res;
  for (int k = 0; k < 4; ++k) {
    const int src = order[k];
    res.eigenvalues[k] = a[src][src];
    for (int i = 0; i < 4; ++i) res.eigenvectors[k][i] = v[i][src];
    // Sign convention: first component of largest magnitude made non-negative.
    int arg = 0;
    double best = std::fabs(res.eigenvectors[k][0]);
    for (int i = 1; i < 4; ++i) {
      if (std::fabs(res.eigenvectors[k][i]) > best) {
        best = std::fabs(res.eigenvectors[k][i]);
        arg = i;
      }
    }
    if (res.eigenvectors[k][arg] < 0.0)
      for (int i = 0; i < 4; ++i) res.eigenvectors[k][i] = -res.eigenvectors[k][i];
  }
  return res;
}

}  // namespace tumorseg
