#pragma once

#include <Eigen/Core>

#include "ampfsi/params.hpp"

namespace ampfsi {

/// Node-centred scalar field on a Grid2D.
///
/// Storage is (nx) x (ny + 1 + 2*ghost): x is periodic so only the nx
/// distinct columns are kept, and rows j = -ghost .. ny + ghost are stored.
/// Element access wraps i modulo nx.
template <typename Scalar>
class GridFieldT {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  GridFieldT() = default;
  explicit GridFieldT(const Grid2D& g)
      : nx_(g.nx), ny_(g.ny), data_(Array::Zero(g.nx, g.ny + 1 + 2 * Grid2D::ghost)) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  Scalar& operator()(int i, int j) { return data_(wrap(i), j + Grid2D::ghost); }
  const Scalar& operator()(int i, int j) const { return data_(wrap(i), j + Grid2D::ghost); }

  /// Row j (all nx columns) as an Eigen column block.
  auto row(int j) { return data_.col(j + Grid2D::ghost); }
  auto row(int j) const { return data_.col(j + Grid2D::ghost); }

  Array& data() { return data_; }
  const Array& data() const { return data_; }

  void set_zero() { data_.setZero(); }

  /// Max |f| over rows j0..j1 inclusive.
  Scalar max_abs(int j0, int j1) const {
    return data_.middleCols(j0 + Grid2D::ghost, j1 - j0 + 1).abs().maxCoeff();
  }
  /// Max |f| over the physical rows 0..ny.
  Scalar max_abs() const { return max_abs(0, ny_); }

 private:
  int wrap(int i) const {
    const int r = i % nx_;
    return r < 0 ? r + nx_ : r;
  }

  int nx_ = 0;
  int ny_ = 0;
  Array data_;
};

using GridField = GridFieldT<double>;

/// Periodic one-dimensional array along the interface with two components
/// (horizontal, vertical). Component 0 is inactive for vertical-only shells.
using InterfaceArray = Eigen::Array<double, 2, Eigen::Dynamic>;

}  // namespace ampfsi
