#include "qmbmw/tensor_operator.hpp"

#include <algorithm>
#include <numeric>

namespace qmbmw {

namespace {

std::uint32_t ipow(int b, int e) {
    std::uint32_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::uint32_t>(b);
    return r;
}

}  // namespace

template <class S>
TensorOperator<S>::TensorOperator(int dimV, int legs) : N_(dimV), n_(legs), dim_(ipow(dimV, legs)), rows_(dim_) {
    if (dimV < 1 || legs < 0) throw std::invalid_argument("bad operator shape");
    if (static_cast<double>(dim_) > 5e7) throw std::length_error("operator dimension too large");
}

template <class S>
TensorOperator<S> TensorOperator<S>::identity(int dimV, int legs) {
    TensorOperator x(dimV, legs);
    for (Index i = 0; i < x.dim_; ++i) x.rows_[i].push_back({i, S(1)});
    return x;
}

template <class S>
TensorOperator<S> TensorOperator<S>::permutation(int dimV) {
    TensorOperator x(dimV, 2);
    for (int i = 0; i < dimV; ++i)
        for (int j = 0; j < dimV; ++j)
            x.rows_[i * dimV + j].push_back({static_cast<Index>(j * dimV + i), S(1)});
    return x;
}

template <class S>
TensorOperator<S> TensorOperator<S>::matrixUnit(int dimV, int row, int col) {
    TensorOperator x(dimV, 1);
    x.rows_[row].push_back({static_cast<Index>(col), S(1)});
    return x;
}

template <class S>
TensorOperator<S> TensorOperator<S>::scalar(const S& s) {
    TensorOperator x(1, 0);
    if (!s.isZero()) x.rows_[0].push_back({0, s});
    return x;
}

template <class S>
TensorOperator<S> TensorOperator<S>::fromDense(int dimV, int legs, const Mat<S>& m) {
    TensorOperator x(dimV, legs);
    if (m.rows() != x.dim_ || m.cols() != x.dim_) throw std::invalid_argument("dense shape mismatch");
    for (Index i = 0; i < x.dim_; ++i)
        for (Index j = 0; j < x.dim_; ++j)
            if (!m(i, j).isZero()) x.rows_[i].push_back({j, m(i, j)});
    return x;
}

template <class S>
S TensorOperator<S>::at(Index r, Index c) const {
    const auto& row = rows_.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, Index v) { return e.col < v; });
    if (it != row.end() && it->col == c) return it->value;
    return S(0);
}

template <class S>
std::size_t TensorOperator<S>::nnz() const {
    std::size_t k = 0;
    for (const auto& r : rows_) k += r.size();
    return k;
}

template <class S>
S TensorOperator<S>::scalarValue() const {
    if (n_ != 0) throw std::logic_error("scalarValue on an operator with legs");
    return at(0, 0);
}

template <class S>
Mat<S> TensorOperator<S>::toDense() const {
    Mat<S> m(dim_, dim_);
    for (Index i = 0; i < dim_; ++i)
        for (const auto& e : rows_[i]) m(i, e.col) = e.value;
    return m;
}

template <class S>
std::vector<int> TensorOperator<S>::digits(Index idx) const {
    std::vector<int> d(n_);
    for (int k = n_ - 1; k >= 0; --k) {
        d[k] = static_cast<int>(idx % N_);
        idx /= N_;
    }
    return d;
}

template <class S>
typename TensorOperator<S>::Index TensorOperator<S>::flatten(const std::vector<int>& digits) const {
    if (static_cast<int>(digits.size()) != n_) throw LegRangeError("multi-index length mismatch");
    Index idx = 0;
    for (int d : digits) {
        if (d < 0 || d >= N_) throw LegRangeError("multi-index component out of range");
        idx = idx * N_ + static_cast<Index>(d);
    }
    return idx;
}

namespace {

template <class S>
void checkShape(const TensorOperator<S>& a, const TensorOperator<S>& b) {
    if (a.dimV() != b.dimV() || a.legs() != b.legs()) throw std::invalid_argument("operator shape mismatch");
}

template <class S, class Op>
std::vector<typename TensorOperator<S>::Entry> mergeRows(const std::vector<typename TensorOperator<S>::Entry>& x,
                                                         const std::vector<typename TensorOperator<S>::Entry>& y, Op op) {
    std::vector<typename TensorOperator<S>::Entry> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].col < y[j].col)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].col < x[i].col) {
            out.push_back({y[j].col, op(S(0), y[j].value)});
            ++j;
        } else {
            S v = op(x[i].value, y[j].value);
            if (!v.isZero()) out.push_back({x[i].col, v});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

template <class S>
TensorOperator<S>& TensorOperator<S>::operator+=(const TensorOperator& o) {
    checkShape(*this, o);
    for (Index i = 0; i < dim_; ++i) {
        if (o.rows_[i].empty()) continue;
        rows_[i] = mergeRows<S>(rows_[i], o.rows_[i], [](const S& a, const S& b) { return a + b; });
    }
    return *this;
}

template <class S>
TensorOperator<S>& TensorOperator<S>::operator-=(const TensorOperator& o) {
    checkShape(*this, o);
    for (Index i = 0; i < dim_; ++i) {
        if (o.rows_[i].empty()) continue;
        rows_[i] = mergeRows<S>(rows_[i], o.rows_[i], [](const S& a, const S& b) { return a - b; });
    }
    return *this;
}

template <class S>
TensorOperator<S>& TensorOperator<S>::operator*=(const S& s) {
    if (s.isZero()) {
        for (auto& r : rows_) r.clear();
        return *this;
    }
    for (auto& r : rows_)
        for (auto& e : r) e.value *= s;
    return *this;
}

template <class S>
TensorOperator<S> TensorOperator<S>::compose(const TensorOperator& a, const TensorOperator& b) {
    checkShape(a, b);
    TensorOperator out(a.N_, a.n_);
    std::vector<S> acc(a.dim_);
    std::vector<char> mark(a.dim_, 0);
    std::vector<Index> touched;
    for (Index i = 0; i < a.dim_; ++i) {
        touched.clear();
        for (const auto& ea : a.rows_[i]) {
            for (const auto& eb : b.rows_[ea.col]) {
                if (!mark[eb.col]) {
                    mark[eb.col] = 1;
                    touched.push_back(eb.col);
                    acc[eb.col] = ea.value * eb.value;
                } else {
                    acc[eb.col].addMul(ea.value, eb.value);
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& row = out.rows_[i];
        row.reserve(touched.size());
        for (Index c : touched) {
            mark[c] = 0;
            if (!acc[c].isZero()) row.push_back({c, acc[c]});
        }
    }
    return out;
}

template <class S>
bool TensorOperator<S>::equals(const TensorOperator& o) const {
    if (n_ == 0 && o.n_ == 0) return scalarValue() == o.scalarValue();
    if (N_ != o.N_ || n_ != o.n_) return false;
    for (Index i = 0; i < dim_; ++i) {
        const auto& x = rows_[i];
        const auto& y = o.rows_[i];
        if (x.size() != y.size()) return false;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k].col != y[k].col || x[k].value != y[k].value) return false;
    }
    return true;
}

template <class S>
TensorOperator<S>::Builder::Builder(int dimV, int legs) : N_(dimV), n_(legs), rows_(ipow(dimV, legs)) {}

template <class S>
void TensorOperator<S>::Builder::add(Index r, Index c, const S& v) {
    if (!v.isZero()) rows_[r].push_back({c, v});
}

template <class S>
void TensorOperator<S>::Builder::addMul(Index r, Index c, const S& a, const S& b) {
    rows_[r].push_back({c, a * b});
}

template <class S>
TensorOperator<S> TensorOperator<S>::Builder::finish() {
    TensorOperator out(N_, n_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        auto& row = rows_[i];
        std::stable_sort(row.begin(), row.end(), [](const Entry& x, const Entry& y) { return x.col < y.col; });
        auto& dst = out.rows_[i];
        for (std::size_t k = 0; k < row.size();) {
            S v = row[k].value;
            std::size_t l = k + 1;
            while (l < row.size() && row[l].col == row[k].col) v += row[l++].value;
            if (!v.isZero()) dst.push_back({row[k].col, v});
            k = l;
        }
        row.clear();
        row.shrink_to_fit();
    }
    return out;
}

template <class S>
TensorOperator<S> embed(const TensorOperator<S>& x, const std::vector<int>& legs, int n) {
    using Index = typename TensorOperator<S>::Index;
    const int N = x.dimV(), k = x.legs();
    if (static_cast<int>(legs.size()) != k) throw LegRangeError("embed: leg list does not match operator legs");
    std::vector<char> used(n + 1, 0);
    for (int l : legs) {
        if (l < 1 || l > n || used[l]) throw LegRangeError("embed: leg out of range or repeated");
        used[l] = 1;
    }
    std::vector<Index> place(n + 1);
    for (int l = 1; l <= n; ++l) place[l] = ipow(N, n - l);
    const Index dimX = ipow(N, k);
    std::vector<Index> contrib(dimX);
    for (Index xi = 0; xi < dimX; ++xi) {
        Index v = xi, c = 0;
        for (int t = k - 1; t >= 0; --t) {
            c += (v % N) * place[legs[t]];
            v /= N;
        }
        contrib[xi] = c;
    }
    std::vector<int> rest;
    for (int l = 1; l <= n; ++l)
        if (!used[l]) rest.push_back(l);
    const Index dimRest = ipow(N, n - k);
    std::vector<Index> restContrib(dimRest);
    for (Index y = 0; y < dimRest; ++y) {
        Index v = y, c = 0;
        for (int t = static_cast<int>(rest.size()) - 1; t >= 0; --t) {
            c += (v % N) * place[rest[t]];
            v /= N;
        }
        restContrib[y] = c;
    }
    typename TensorOperator<S>::Builder b(N, n);
    for (Index y = 0; y < dimRest; ++y)
        for (Index xr = 0; xr < dimX; ++xr)
            for (const auto& e : x.row(xr)) b.add(restContrib[y] + contrib[xr], restContrib[y] + contrib[e.col], e.value);
    return b.finish();
}

template <class S>
TensorOperator<S> embedAt(const TensorOperator<S>& x, int m, int n) {
    if (x.legs() != 2) throw LegRangeError("embedAt expects a 2-leg operator");
    if (m < 1 || m > n - 1) throw LegRangeError("embedAt: leg " + std::to_string(m) + " out of range for n=" + std::to_string(n));
    return embed(x, {m, m + 1}, n);
}

template <class S>
TensorOperator<S> embedPair(const TensorOperator<S>& x, int m, int r, int n) {
    if (x.legs() != 2) throw LegRangeError("embedPair expects a 2-leg operator");
    if (m < 1 || m >= r || r > n) throw LegRangeError("embedPair: need 1 <= m < r <= n");
    return embed(x, {m, r}, n);
}

template <class S>
TensorOperator<S> shiftUp(const TensorOperator<S>& x, int k, int n) {
    std::vector<int> legs(x.legs());
    std::iota(legs.begin(), legs.end(), k + 1);
    return embed(x, legs, n);
}

template <class S>
TensorOperator<S> partialTrace(const TensorOperator<S>& x, const std::vector<int>& legSet) {
    using Index = typename TensorOperator<S>::Index;
    const int N = x.dimV(), n = x.legs();
    if (legSet.empty()) throw LegRangeError("partialTrace: empty leg set");
    std::vector<char> traced(n + 1, 0);
    for (int l : legSet) {
        if (l < 1 || l > n || traced[l]) throw LegRangeError("partialTrace: leg out of range or repeated");
        traced[l] = 1;
    }
    const int m = n - static_cast<int>(legSet.size());
    const Index dim = x.dim();
    std::vector<Index> key(dim), red(dim);
    for (Index idx = 0; idx < dim; ++idx) {
        Index v = idx, kk = 0, rr = 0, kp = 1, rp = 1;
        for (int l = n; l >= 1; --l) {
            Index d = v % N;
            v /= N;
            if (traced[l]) { kk += d * kp; kp *= N; }
            else { rr += d * rp; rp *= N; }
        }
        key[idx] = kk;
        red[idx] = rr;
    }
    typename TensorOperator<S>::Builder b(N, m);
    for (Index r = 0; r < dim; ++r)
        for (const auto& e : x.row(r))
            if (key[r] == key[e.col]) b.add(red[r], red[e.col], e.value);
    auto out = b.finish();
    return out;
}

template <class S>
TensorOperator<S> weightedTrace(const TensorOperator<S>& x, const std::vector<int>& legSet, const TensorOperator<S>& weight) {
    if (weight.legs() != 1 || weight.dimV() != x.dimV()) throw std::invalid_argument("weight must be a one-leg operator");
    TensorOperator<S> w = TensorOperator<S>::identity(x.dimV(), x.legs());
    for (int l : legSet) w = embed(weight, {l}, x.legs()) * w;
    return partialTrace(w * x, legSet);
}

template <class S>
std::optional<TensorOperator<S>> inverse(const TensorOperator<S>& x) {
    auto inv = inverseOf(x.toDense());
    if (!inv) return std::nullopt;
    return TensorOperator<S>::fromDense(x.dimV(), x.legs(), *inv);
}

template <class S>
TensorOperator<S> tensorPower(const TensorOperator<S>& oneLeg, int n) {
    TensorOperator<S> out = TensorOperator<S>::identity(oneLeg.dimV(), n);
    for (int l = 1; l <= n; ++l) out = out * embed(oneLeg, {l}, n);
    return out;
}

template <class S>
nlohmann::json toJson(const TensorOperator<S>& x) {
    nlohmann::json entries = nlohmann::json::array();
    for (typename TensorOperator<S>::Index r = 0; r < x.dim(); ++r) {
        for (const auto& e : x.row(r)) {
            auto rd = x.digits(r), cd = x.digits(e.col);
            for (int& d : rd) ++d;
            for (int& d : cd) ++d;
            entries.push_back({{"row", rd}, {"col", cd}, {"value", e.value.str()}});
        }
    }
    return {{"dimV", x.dimV()}, {"legs", x.legs()}, {"entries", entries}};
}

template <class S>
TensorOperator<S> operatorFromJson(const nlohmann::json& j) {
    const int N = j.at("dimV").get<int>(), n = j.at("legs").get<int>();
    if (N < 1 || n < 0) throw ParseError("operator JSON: bad dimV/legs");
    TensorOperator<S> shape(N, n);
    typename TensorOperator<S>::Builder b(N, n);
    for (const auto& e : j.at("entries")) {
        auto rd = e.at("row").get<std::vector<int>>(), cd = e.at("col").get<std::vector<int>>();
        for (int& d : rd) --d;
        for (int& d : cd) --d;
        b.add(shape.flatten(rd), shape.flatten(cd), parseScalar<S>(e.at("value").get<std::string>()));
    }
    return b.finish();
}

#define QMBMW_INSTANTIATE(S)                                                                               \
    template class TensorOperator<S>;                                                                      \
    template TensorOperator<S> embed(const TensorOperator<S>&, const std::vector<int>&, int);              \
    template TensorOperator<S> embedAt(const TensorOperator<S>&, int, int);                                \
    template TensorOperator<S> embedPair(const TensorOperator<S>&, int, int, int);                         \
    template TensorOperator<S> shiftUp(const TensorOperator<S>&, int, int);                                \
    template TensorOperator<S> partialTrace(const TensorOperator<S>&, const std::vector<int>&);            \
    template TensorOperator<S> weightedTrace(const TensorOperator<S>&, const std::vector<int>&,            \
                                             const TensorOperator<S>&);                                    \
    template std::optional<TensorOperator<S>> inverse(const TensorOperator<S>&);                          \
    template TensorOperator<S> tensorPower(const TensorOperator<S>&, int);                                 \
    template nlohmann::json toJson(const TensorOperator<S>&);                                              \
    template TensorOperator<S> operatorFromJson<S>(const nlohmann::json&);

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
