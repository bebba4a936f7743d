#ifndef TUMORSEG_GRID_HPP
#define TUMORSEG_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tumorseg {

// Dense row-major 2D grid with value semantics. Index order is (row, col),
// origin at the top-left corner; this convention is used everywhere
// (masks, boxes, displacement fields, exported prompt records).
template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  T& operator()(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }

  bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }
  bool same_dims(const Grid2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  friend bool operator==(const Grid2& a, const Grid2& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.v_ == b.v_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> v_;
};

using PlaneF = Grid2<float>;
using PlaneU8 = Grid2<std::uint8_t>;

// Boolean grid stored as 0/1 bytes. Houses the pixel sets X (ground truth)
// and Y (prediction) that the overlap and boundary metrics operate on.
using BinaryMask = Grid2<std::uint8_t>;

}  // namespace tumorseg

#endif
