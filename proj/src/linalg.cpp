#include "qmbmw/linalg.hpp"

#include <algorithm>

namespace qmbmw {

template <class S>
Echelon<S> reducedEchelon(Mat<S> m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    std::vector<int> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index p = r;
        while (p < rows && m(p, c).isZero()) ++p;
        if (p == rows) continue;
        if (p != r) m.row(p).swap(m.row(r));
        S inv = m(r, c).inverse();
        S* pr = m.row(r).data();
        for (Eigen::Index k = c; k < cols; ++k)
            if (!pr[k].isZero()) pr[k] *= inv;
        // sparse support of the pivot row speeds up the elimination
        std::vector<Eigen::Index> support;
        for (Eigen::Index k = c; k < cols; ++k)
            if (!pr[k].isZero()) support.push_back(k);
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r) continue;
            S f = m(i, c);
            if (f.isZero()) continue;
            S* pi = m.row(i).data();
            S nf = -f;
            for (Eigen::Index k : support) pi[k].addMul(nf, pr[k]);
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    Echelon<S> e;
    e.rref = m.topRows(r);
    e.pivots = std::move(pivots);
    return e;
}

template <class S>
std::optional<Mat<S>> inverseOf(const Mat<S>& m) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) return std::nullopt;
    Mat<S> aug(n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < 2 * n; ++j)
            aug(i, j) = j < n ? m(i, j) : (j - n == i ? S(1) : S(0));
    auto e = reducedEchelon(aug);
    if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    return Mat<S>(e.rref.rightCols(n));
}

template <class S>
Mat<S> nullspaceRows(const Mat<S>& m) {
    const Eigen::Index cols = m.cols();
    auto e = reducedEchelon(m);
    std::vector<char> isPivot(cols, 0);
    for (int p : e.pivots) isPivot[p] = 1;
    std::vector<Eigen::Index> free;
    for (Eigen::Index c = 0; c < cols; ++c)
        if (!isPivot[c]) free.push_back(c);
    Mat<S> out(static_cast<Eigen::Index>(free.size()), cols);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = S(0);
    for (std::size_t t = 0; t < free.size(); ++t) {
        Eigen::Index f = free[t];
        out(t, f) = S(1);
        for (int r = 0; r < e.rank(); ++r) out(t, e.pivots[r]) = -e.rref(r, f);
    }
    return out;
}

template Echelon<Rational> reducedEchelon(Mat<Rational>);
template Echelon<ModP> reducedEchelon(Mat<ModP>);
template std::optional<Mat<Rational>> inverseOf(const Mat<Rational>&);
template std::optional<Mat<ModP>> inverseOf(const Mat<ModP>&);
template Mat<Rational> nullspaceRows(const Mat<Rational>&);
template Mat<ModP> nullspaceRows(const Mat<ModP>&);

}  // namespace qmbmw
