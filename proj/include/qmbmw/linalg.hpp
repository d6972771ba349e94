#pragma once

// Exact Gauss-Jordan elimination on Eigen matrices over Rational / ModP.
// Pivots are taken in fixed column-major order (first nonzero row), so results are deterministic.

#include "qmbmw/scalar.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace qmbmw {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
struct Echelon {
    Mat<S> rref;              // rank x cols, pivot columns are unit vectors
    std::vector<int> pivots;  // pivot column of each row
    int rank() const { return static_cast<int>(pivots.size()); }
};

template <class S>
Echelon<S> reducedEchelon(Mat<S> m);

template <class S>
int rankOf(const Mat<S>& m) { return reducedEchelon(m).rank(); }

template <class S>
std::optional<Mat<S>> inverseOf(const Mat<S>& m);

// Rows of the result span {x : m x = 0}.
template <class S>
Mat<S> nullspaceRows(const Mat<S>& m);

}  // namespace qmbmw
