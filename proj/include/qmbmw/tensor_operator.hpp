#pragma once

// Sparse linear operators on V^{⊗n}, dim V = N.
// Multi-indices are flattened row-major with leg 1 most significant; digits are 0-based here
// and 1-based in JSON.

#include "qmbmw/linalg.hpp"
#include "qmbmw/scalar.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qmbmw {

struct LegRangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

template <class S>
class TensorOperator {
public:
    using Index = std::uint32_t;
    struct Entry {
        Index col;
        S value;
    };

    TensorOperator() = default;
    TensorOperator(int dimV, int legs);  // zero operator

    static TensorOperator identity(int dimV, int legs);
    static TensorOperator permutation(int dimV);  // P on V⊗V
    static TensorOperator matrixUnit(int dimV, int row, int col);  // e_row,col on one leg
    static TensorOperator scalar(const S& s);  // 0-leg operator
    static TensorOperator fromDense(int dimV, int legs, const Mat<S>& m);

    int dimV() const { return N_; }
    int legs() const { return n_; }
    Index dim() const { return dim_; }
    const std::vector<Entry>& row(Index r) const { return rows_[r]; }
    S at(Index r, Index c) const;
    std::size_t nnz() const;
    bool isZero() const { return nnz() == 0; }
    // value of a 0-leg operator
    S scalarValue() const;

    Mat<S> toDense() const;
    std::vector<int> digits(Index idx) const;
    Index flatten(const std::vector<int>& digits) const;

    TensorOperator& operator+=(const TensorOperator& o);
    TensorOperator& operator-=(const TensorOperator& o);
    TensorOperator& operator*=(const S& s);

    friend TensorOperator operator+(TensorOperator a, const TensorOperator& b) { return a += b; }
    friend TensorOperator operator-(TensorOperator a, const TensorOperator& b) { return a -= b; }
    friend TensorOperator operator-(TensorOperator a) { return a *= S(-1); }
    friend TensorOperator operator*(const S& s, TensorOperator a) { return a *= s; }
    friend TensorOperator operator*(const TensorOperator& a, const TensorOperator& b) { return compose(a, b); }
    friend bool operator==(const TensorOperator& a, const TensorOperator& b) { return a.equals(b); }
    friend bool operator!=(const TensorOperator& a, const TensorOperator& b) { return !a.equals(b); }

    static TensorOperator compose(const TensorOperator& a, const TensorOperator& b);
    bool equals(const TensorOperator& o) const;

    // Assembles from unsorted (row, col, value) contributions; duplicates are summed, zeros pruned.
    class Builder {
    public:
        Builder(int dimV, int legs);
        void add(Index r, Index c, const S& v);
        void addMul(Index r, Index c, const S& a, const S& b);
        TensorOperator finish();
    private:
        int N_, n_;
        std::vector<std::vector<Entry>> rows_;
    };

private:
    int N_ = 0;
    int n_ = 0;
    Index dim_ = 1;
    std::vector<std::vector<Entry>> rows_;
};

// X on k legs placed at the 1-based positions `legs` (any order, distinct) of V⊗n.
template <class S>
TensorOperator<S> embed(const TensorOperator<S>& x, const std::vector<int>& legs, int n);

// X_m: a 2-leg operator acting on legs (m, m+1) of V⊗n.
template <class S>
TensorOperator<S> embedAt(const TensorOperator<S>& x, int m, int n);

// X_{mr}: a 2-leg operator acting on legs (m, r), m < r.
template <class S>
TensorOperator<S> embedPair(const TensorOperator<S>& x, int m, int r, int n);

// Operator on legs k+1..k+legs(x) of V⊗n.
template <class S>
TensorOperator<S> shiftUp(const TensorOperator<S>& x, int k, int n);

template <class S>
TensorOperator<S> partialTrace(const TensorOperator<S>& x, const std::vector<int>& legSet);

// Tr over legSet of (W ⊗ ... ⊗ W) X, W a one-leg weight inserted on every traced leg.
template <class S>
TensorOperator<S> weightedTrace(const TensorOperator<S>& x, const std::vector<int>& legSet,
                                const TensorOperator<S>& weight);

template <class S>
std::optional<TensorOperator<S>> inverse(const TensorOperator<S>& x);

template <class S>
TensorOperator<S> tensorPower(const TensorOperator<S>& oneLeg, int n);

template <class S>
nlohmann::json toJson(const TensorOperator<S>& x);

template <class S>
TensorOperator<S> operatorFromJson(const nlohmann::json& j);

}  // namespace qmbmw
