#include "qmbmw/qma.hpp"

#include <algorithm>

namespace qmbmw {

namespace {

template <class S>
void axpy(S* dst, const S* src, const S& x, int w) {
    for (int k = 0; k < w; ++k)
        if (!src[k].isZero()) dst[k].addMul(x, src[k]);
}

template <class S>
bool allZero(const S* p, int w) {
    for (int k = 0; k < w; ++k)
        if (!p[k].isZero()) return false;
    return true;
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

// ---------------------------------------------------------------- QmaTensor

template <class S>
QmaTensor<S>::QmaTensor(int dimV, int legs, int degree, int width, bool reduced)
    : N_(dimV), n_(legs), deg_(degree), dim_(static_cast<Index>(ipow(dimV, legs))), reduced_(reduced) {
    data_ = Mat<S>::Zero(static_cast<Eigen::Index>(dim_) * dim_, width);
}

template <class S>
bool QmaTensor<S>::entryIsZero(Index i, Index j) const {
    return allZero(entry(i, j), width());
}

template <class S>
bool QmaTensor<S>::isZero() const {
    for (Eigen::Index r = 0; r < data_.rows(); ++r)
        if (!allZero(data_.row(r).data(), width())) return false;
    return true;
}

template <class S>
void QmaTensor<S>::checkShape(const QmaTensor& o) const {
    if (N_ != o.N_ || n_ != o.n_ || deg_ != o.deg_ || width() != o.width() || reduced_ != o.reduced_)
        throw std::invalid_argument("tensor shape mismatch");
}

template <class S>
QmaTensor<S>& QmaTensor<S>::operator+=(const QmaTensor& o) {
    checkShape(o);
    for (Eigen::Index r = 0; r < data_.rows(); ++r) axpy(data_.row(r).data(), o.data_.row(r).data(), S(1), width());
    return *this;
}

template <class S>
QmaTensor<S>& QmaTensor<S>::operator-=(const QmaTensor& o) {
    checkShape(o);
    for (Eigen::Index r = 0; r < data_.rows(); ++r) axpy(data_.row(r).data(), o.data_.row(r).data(), S(-1), width());
    return *this;
}

template <class S>
QmaTensor<S>& QmaTensor<S>::operator*=(const S& s) {
    for (Eigen::Index r = 0; r < data_.rows(); ++r)
        for (Eigen::Index c = 0; c < data_.cols(); ++c)
            if (!data_(r, c).isZero()) data_(r, c) *= s;
    return *this;
}

template <class S>
bool QmaTensor<S>::equals(const QmaTensor& o) const {
    if (N_ != o.N_ || n_ != o.n_ || deg_ != o.deg_ || width() != o.width() || reduced_ != o.reduced_) return false;
    for (Eigen::Index r = 0; r < data_.rows(); ++r)
        for (Eigen::Index c = 0; c < data_.cols(); ++c)
            if (data_(r, c) != o.data_(r, c)) return false;
    return true;
}

template <class S>
nlohmann::json tensorDiff(const QmaTensor<S>& a, const QmaTensor<S>& b, int maxEntries) {
    nlohmann::json out = nlohmann::json::array();
    auto shape = [](const QmaTensor<S>& t) {
        return nlohmann::json{{"legs", t.legs()}, {"degree", t.degree()}, {"width", t.width()}};
    };
    if (a.legs() != b.legs() || a.degree() != b.degree() || a.width() != b.width() || a.dimV() != b.dimV()) {
        out.push_back({{"shape", {shape(a), shape(b)}}});
        return out;
    }
    TensorOperator<S> idx(a.dimV(), a.legs());
    auto coords = [](const S* p, int w) {
        nlohmann::json c = nlohmann::json::object();
        for (int k = 0; k < w && c.size() < 6; ++k)
            if (!p[k].isZero()) c[std::to_string(k)] = p[k].str();
        return c;
    };
    for (typename QmaTensor<S>::Index i = 0; i < a.dim(); ++i)
        for (typename QmaTensor<S>::Index j = 0; j < a.dim(); ++j) {
            const S *pa = a.entry(i, j), *pb = b.entry(i, j);
            bool same = true;
            for (int k = 0; k < a.width() && same; ++k) same = pa[k] == pb[k];
            if (same) continue;
            auto rd = idx.digits(i), cd = idx.digits(j);
            for (int& d : rd) ++d;
            for (int& d : cd) ++d;
            out.push_back({{"row", rd}, {"col", cd}, {"lhs", coords(pa, a.width())}, {"rhs", coords(pb, b.width())}});
            if (static_cast<int>(out.size()) >= maxEntries) return out;
        }
    return out;
}

// ---------------------------------------------------------------- IdealReducer

template <class S>
IdealReducer<S>::IdealReducer(const CompatiblePair<S>& pair, int maxDegree) : pair_(pair), N_(pair.R.N), maxDegree_(maxDegree) {
    if (maxDegree < 1) throw std::invalid_argument("maxDegree must be at least 1");
    const int G = generators();
    nf_.push_back(Mat<S>::Identity(1, 1));
    std_.push_back({0});
    nf_.push_back(Mat<S>::Identity(G, G));
    std_.emplace_back();
    for (int k = 0; k < G; ++k) std_[1].push_back(static_cast<std::uint64_t>(k));
    if (maxDegree < 2) return;

    // degree-2 relations from the free product M_1bar M_2bar
    Tensor m1 = copy(1, 2), m2 = copy(2, 2);
    const auto D = m1.dim();
    Tensor p(N_, 2, 2, G * G, false);
    for (typename Tensor::Index i = 0; i < D; ++i)
        for (typename Tensor::Index k = 0; k < D; ++k) {
            const S* a = m1.entry(i, k);
            if (allZero(a, G)) continue;
            for (typename Tensor::Index j = 0; j < D; ++j) {
                const S* b = m2.entry(k, j);
                S* o = p.entry(i, j);
                for (int x = 0; x < G; ++x) {
                    if (a[x].isZero()) continue;
                    for (int y = 0; y < G; ++y)
                        if (!b[y].isZero()) o[x * G + y].addMul(a[x], b[y]);
                }
            }
        }
    const Op R1 = pair.R.R;
    Tensor rel = times(R1, p) - times(p, R1);
    relEntries_ = rel.data();
    relBasis_ = reducedEchelon(relEntries_).rref;
    auto ann = reducedEchelon(nullspaceRows(relEntries_));
    nf_.push_back(ann.rref);
    std_.emplace_back(ann.pivots.begin(), ann.pivots.end());
    for (int n = 3; n <= maxDegree; ++n) buildDegree(n);
}

template <class S>
void IdealReducer<S>::buildDegree(int n) {
    const int G = generators();
    const Mat<S>& prev = nf_[n - 1];
    const Eigen::Index d1 = prev.rows();
    const std::uint64_t U = monomials(n - 2);
    const Eigen::Index rk = relBasis_.rows();
    // unknowns c[j][x]: the functional w y -> sum_j c[j][y] f_j(w) on degree-n monomials
    Mat<S> eq = Mat<S>::Zero(static_cast<Eigen::Index>(U) * rk, d1 * G);
    for (std::uint64_t u = 0; u < U; ++u)
        for (Eigen::Index r = 0; r < rk; ++r) {
            S* row = eq.row(static_cast<Eigen::Index>(u) * rk + r).data();
            for (int y1 = 0; y1 < G; ++y1) {
                const Eigen::Index col = static_cast<Eigen::Index>(u) * G + y1;
                for (int x = 0; x < G; ++x) {
                    const S& rv = relBasis_(r, y1 * G + x);
                    if (rv.isZero()) continue;
                    for (Eigen::Index j = 0; j < d1; ++j)
                        if (!prev(j, col).isZero()) row[j * G + x].addMul(rv, prev(j, col));
                }
            }
        }
    Mat<S> c = nullspaceRows(eq);
    const std::uint64_t W = monomials(n - 1);
    Mat<S> raw = Mat<S>::Zero(c.rows(), static_cast<Eigen::Index>(W) * G);
    for (Eigen::Index k = 0; k < c.rows(); ++k)
        for (Eigen::Index j = 0; j < d1; ++j)
            for (int y = 0; y < G; ++y) {
                const S& cv = c(k, j * G + y);
                if (cv.isZero()) continue;
                for (std::uint64_t w = 0; w < W; ++w) {
                    const S& pv = prev(j, static_cast<Eigen::Index>(w));
                    if (!pv.isZero()) raw(k, static_cast<Eigen::Index>(w) * G + y).addMul(cv, pv);
                }
            }
    auto e = reducedEchelon(raw);
    nf_.push_back(e.rref);
    std_.emplace_back(e.pivots.begin(), e.pivots.end());
}

template <class S>
void IdealReducer<S>::checkDegree(int n) const {
    if (n < 0 || n > maxDegree_)
        throw DegreeOverflow("degree " + std::to_string(n) + " exceeds maxDegree " + std::to_string(maxDegree_));
}

template <class S>
int IdealReducer<S>::dim(int degree) const {
    checkDegree(degree);
    return static_cast<int>(nf_[degree].rows());
}

template <class S>
std::vector<int> IdealReducer<S>::dims() const {
    std::vector<int> d;
    for (int n = 0; n <= maxDegree_; ++n) d.push_back(dim(n));
    return d;
}

template <class S>
std::uint64_t IdealReducer<S>::monomials(int degree) const {
    return ipow(static_cast<std::uint64_t>(generators()), degree);
}

template <class S>
const std::vector<std::uint64_t>& IdealReducer<S>::standardMonomials(int degree) const {
    checkDegree(degree);
    return std_[degree];
}

template <class S>
const Mat<S>& IdealReducer<S>::normalForms(int degree) const {
    checkDegree(degree);
    return nf_[degree];
}

template <class S>
Vec<S> IdealReducer<S>::reduceVector(int degree, const Vec<S>& free) const {
    const Mat<S>& nf = normalForms(degree);
    if (free.size() != nf.cols()) throw std::invalid_argument("free vector has the wrong length");
    Vec<S> out = Vec<S>::Zero(nf.rows());
    for (Eigen::Index m = 0; m < free.size(); ++m) {
        if (free(m).isZero()) continue;
        for (Eigen::Index k = 0; k < nf.rows(); ++k)
            if (!nf(k, m).isZero()) out(k).addMul(free(m), nf(k, m));
    }
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::reduce(const Tensor& free) const {
    if (free.reduced()) return free;
    const Mat<S>& nf = normalForms(free.degree());
    if (free.width() != nf.cols()) throw std::invalid_argument("free tensor has the wrong width");
    Tensor out(N_, free.legs(), free.degree(), static_cast<int>(nf.rows()), true);
    for (Eigen::Index r = 0; r < free.data().rows(); ++r) {
        const S* src = free.data().row(r).data();
        S* dst = out.data().row(r).data();
        for (Eigen::Index m = 0; m < nf.cols(); ++m) {
            if (src[m].isZero()) continue;
            for (Eigen::Index k = 0; k < nf.rows(); ++k)
                if (!nf(k, m).isZero()) dst[k].addMul(src[m], nf(k, m));
        }
    }
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::scalar(const Op& x) const {
    if (x.dimV() != N_ && x.legs() > 0) throw std::invalid_argument("operator acts on a different V");
    Tensor out(N_, x.legs(), 0, 1, true);
    for (typename Op::Index r = 0; r < x.dim(); ++r)
        for (const auto& e : x.row(r)) out.entry(r, e.col)[0] = e.value;
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::zero(int legs, int degree) const {
    return Tensor(N_, legs, degree, dim(degree), true);
}

template <class S>
QmaTensor<S> IdealReducer<S>::identityTimes(const Tensor& e, int legs) const {
    if (e.legs() != 0) throw std::invalid_argument("identityTimes expects an element");
    Tensor out(N_, legs, e.degree(), e.width(), e.reduced());
    for (typename Tensor::Index i = 0; i < out.dim(); ++i) std::copy(e.entry(0, 0), e.entry(0, 0) + e.width(), out.entry(i, i));
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::generatorMatrix(int legs) const {
    if (legs < 1) throw LegRangeError("generator matrix needs at least one leg");
    Tensor out(N_, legs, 1, generators(), true);
    const auto rest = static_cast<typename Tensor::Index>(ipow(N_, legs - 1));
    for (int a = 0; a < N_; ++a)
        for (int b = 0; b < N_; ++b)
            for (typename Tensor::Index t = 0; t < rest; ++t) out.entry(a * rest + t, b * rest + t)[a * N_ + b] = S(1);
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::copy(int i, int legs) const {
    if (i < 1 || i > legs) throw LegRangeError("copy index outside 1..legs");
    {
        std::lock_guard lock(mu_);
        auto it = copies_.find({i, legs});
        if (it != copies_.end()) return it->second;
    }
    Tensor out = i == 1 ? generatorMatrix(legs) : times(times(embedAt(pair_.F, i - 1, legs), copy(i - 1, legs)), embedAt(pair_.Finv, i - 1, legs));
    std::lock_guard lock(mu_);
    copies_.emplace(std::make_pair(i, legs), out);
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::copiesProduct(int from, int to, int legs) const {
    if (from < 1 || to > legs) throw LegRangeError("copy range outside 1..legs");
    if (to < from) return identity(legs);
    checkDegree(to - from + 1);
    const bool full = from == 1 && to == legs;
    if (full) {
        std::lock_guard lock(mu_);
        auto it = products_.find(legs);
        if (it != products_.end()) return it->second;
    }
    Tensor out;
    if (full)
        out = legs == 1 ? copy(1, 1) : multiply(embed(copiesProduct(1, legs - 1, legs - 1), legs), copy(legs, legs));
    else {
        out = copy(from, legs);
        for (int k = from + 1; k <= to; ++k) out = multiply(out, copy(k, legs));
    }
    if (full) {
        std::lock_guard lock(mu_);
        products_.emplace(legs, out);
    }
    return out;
}

template <class S>
const typename IdealReducer<S>::MulTable& IdealReducer<S>::mulTable(int a, int b) const {
    checkDegree(a + b);
    std::lock_guard lock(mu_);
    auto it = mul_.find({a, b});
    if (it != mul_.end()) return it->second;
    const Mat<S>& nf = nf_[a + b];
    const std::uint64_t shift = monomials(b);
    MulTable t(std_[a].size() * std_[b].size());
    for (std::size_t i = 0; i < std_[a].size(); ++i)
        for (std::size_t j = 0; j < std_[b].size(); ++j) {
            const auto mono = static_cast<Eigen::Index>(std_[a][i] * shift + std_[b][j]);
            auto& col = t[i * std_[b].size() + j];
            for (Eigen::Index k = 0; k < nf.rows(); ++k)
                if (!nf(k, mono).isZero()) col.entries.emplace_back(static_cast<int>(k), nf(k, mono));
        }
    return mul_.emplace(std::make_pair(a, b), std::move(t)).first->second;
}

template <class S>
QmaTensor<S> IdealReducer<S>::multiply(const Tensor& a, const Tensor& b) const {
    if (a.legs() != b.legs() || a.dimV() != b.dimV()) throw std::invalid_argument("multiply: tensors on different spaces");
    if (!a.reduced() || !b.reduced()) throw std::invalid_argument("multiply expects reduced tensors");
    const int deg = a.degree() + b.degree();
    checkDegree(deg);
    const MulTable& tab = mulTable(a.degree(), b.degree());
    const int wa = a.width(), wb = b.width(), wab = wa * wb;
    Tensor out(N_, a.legs(), deg, dim(deg), true);
    const auto D = a.dim();
    // nonzero structure of b
    struct Nz {
        typename Tensor::Index col;
        std::vector<int> idx;
    };
    std::vector<std::vector<Nz>> bnz(D);
    for (typename Tensor::Index k = 0; k < D; ++k)
        for (typename Tensor::Index j = 0; j < D; ++j) {
            const S* p = b.entry(k, j);
            Nz z{j, {}};
            for (int y = 0; y < wb; ++y)
                if (!p[y].isZero()) z.idx.push_back(y);
            if (!z.idx.empty()) bnz[k].push_back(std::move(z));
        }
    std::vector<S> Z(static_cast<std::size_t>(D) * wab);
    std::vector<char> touched(D);
    std::vector<int> ia;
    for (typename Tensor::Index i = 0; i < D; ++i) {
        std::fill(touched.begin(), touched.end(), 0);
        for (typename Tensor::Index k = 0; k < D; ++k) {
            if (bnz[k].empty()) continue;
            const S* pa = a.entry(i, k);
            ia.clear();
            for (int x = 0; x < wa; ++x)
                if (!pa[x].isZero()) ia.push_back(x);
            if (ia.empty()) continue;
            for (const auto& z : bnz[k]) {
                S* zj = Z.data() + static_cast<std::size_t>(z.col) * wab;
                if (!touched[z.col]) {
                    std::fill(zj, zj + wab, S(0));
                    touched[z.col] = 1;
                }
                const S* pb = b.entry(k, z.col);
                for (int x : ia)
                    for (int y : z.idx) zj[x * wb + y].addMul(pa[x], pb[y]);
            }
        }
        for (typename Tensor::Index j = 0; j < D; ++j) {
            if (!touched[j]) continue;
            const S* zj = Z.data() + static_cast<std::size_t>(j) * wab;
            S* o = out.entry(i, j);
            for (int c = 0; c < wab; ++c) {
                if (zj[c].isZero()) continue;
                for (const auto& [row, v] : tab[c].entries) o[row].addMul(zj[c], v);
            }
        }
    }
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::times(const Op& x, const Tensor& t) const {
    if (x.legs() != t.legs() || x.dimV() != t.dimV()) throw std::invalid_argument("times: operator and tensor on different spaces");
    Tensor out(N_, t.legs(), t.degree(), t.width(), t.reduced());
    const auto D = t.dim();
    for (typename Tensor::Index i = 0; i < D; ++i)
        for (const auto& e : x.row(i))
            for (typename Tensor::Index j = 0; j < D; ++j) axpy(out.entry(i, j), t.entry(e.col, j), e.value, t.width());
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::times(const Tensor& t, const Op& x) const {
    if (x.legs() != t.legs() || x.dimV() != t.dimV()) throw std::invalid_argument("times: operator and tensor on different spaces");
    Tensor out(N_, t.legs(), t.degree(), t.width(), t.reduced());
    const auto D = t.dim();
    for (typename Tensor::Index k = 0; k < D; ++k)
        for (const auto& e : x.row(k))
            for (typename Tensor::Index i = 0; i < D; ++i) axpy(out.entry(i, e.col), t.entry(i, k), e.value, t.width());
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::embed(const Tensor& t, int legs) const {
    if (legs < t.legs()) throw LegRangeError("embed: fewer legs than the tensor");
    Tensor out(N_, legs, t.degree(), t.width(), t.reduced());
    const auto E = static_cast<typename Tensor::Index>(ipow(N_, legs - t.legs()));
    for (typename Tensor::Index i = 0; i < t.dim(); ++i)
        for (typename Tensor::Index j = 0; j < t.dim(); ++j) {
            if (t.entryIsZero(i, j)) continue;
            for (typename Tensor::Index e = 0; e < E; ++e) std::copy(t.entry(i, j), t.entry(i, j) + t.width(), out.entry(i * E + e, j * E + e));
        }
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::weightedTrace(const Tensor& t, const std::vector<int>& traced, const Op& weight) const {
    const int n = t.legs();
    std::vector<char> isTraced(n + 1, 0);
    for (int l : traced) {
        if (l < 1 || l > n || isTraced[l]) throw LegRangeError("weightedTrace: bad leg list");
        isTraced[l] = 1;
    }
    Op w = Op::identity(N_, n);
    for (int l : traced) w = w * qmbmw::embed(weight, {l}, n);
    Tensor tw = times(t, w);
    std::vector<std::uint64_t> place(n + 1);
    for (int l = 1; l <= n; ++l) place[l] = ipow(N_, n - l);
    // offsets of kept and traced multi-indices
    auto offsets = [&](bool tracedSet) {
        std::vector<std::uint64_t> off{0};
        for (int l = 1; l <= n; ++l) {
            if (static_cast<bool>(isTraced[l]) != tracedSet) continue;
            std::vector<std::uint64_t> next;
            for (auto o : off)
                for (int d = 0; d < N_; ++d) next.push_back(o + d * place[l]);
            off = std::move(next);
        }
        return off;
    };
    auto keep = offsets(false), tr = offsets(true);
    Tensor out(N_, n - static_cast<int>(traced.size()), t.degree(), t.width(), t.reduced());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) {
            S* o = out.entry(static_cast<typename Tensor::Index>(i), static_cast<typename Tensor::Index>(j));
            for (auto x : tr)
                axpy(o, tw.entry(static_cast<typename Tensor::Index>(keep[i] + x), static_cast<typename Tensor::Index>(keep[j] + x)), S(1), t.width());
        }
    return out;
}

template <class S>
QmaTensor<S> IdealReducer<S>::apply(const MatrixLinearMap<S>& f, const Tensor& t) const {
    if (t.legs() != 1 || f.dimV() != N_) throw std::invalid_argument("linear maps act on one-leg tensors");
    Tensor out(N_, 1, t.degree(), t.width(), t.reduced());
    const int NN = N_ * N_;
    for (int r = 0; r < NN; ++r)
        for (int c = 0; c < NN; ++c) {
            const S& v = f.coeff()(r, c);
            if (!v.isZero()) axpy(out.data().row(r).data(), t.data().row(c).data(), v, t.width());
        }
    return out;
}

// ---------------------------------------------------------------- QuantumMatrixAlgebra

template <class S>
QuantumMatrixAlgebra<S>::QuantumMatrixAlgebra(const CompatiblePair<S>& pair, int maxDegree)
    : pair_(pair),
      rep_(pair.R),
      red_(pair, maxDegree),
      phi_(mapPhi(pair)),
      phiInv_(mapPhiInv(pair)),
      xi_(mapXi(pair)),
      theta_(mapTheta(pair)),
      thetaInv_(mapThetaInv(pair)) {}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::element(const S& s) const {
    Tensor e(dimV(), 0, 0, 1, true);
    e.entry(0, 0)[0] = s;
    return e;
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::ch(const Op& x) const {
    const int n = x.legs();
    if (n == 0) throw LegRangeError("ch needs at least one leg");
    std::vector<int> all;
    for (int l = 1; l <= n; ++l) all.push_back(l);
    return red_.weightedTrace(red_.times(red_.copiesProduct(1, n, n), x), all, pair_.R.D);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::descendant(const Op& x) const {
    const int n = x.legs();
    if (n == 0) throw LegRangeError("descendant needs at least one leg");
    std::vector<int> rest;
    for (int l = 2; l <= n; ++l) rest.push_back(l);
    return red_.weightedTrace(red_.times(red_.copiesProduct(1, n, n), x), rest, pair_.R.D);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::trR(const Tensor& m) const {
    return red_.weightedTrace(m, {1}, pair_.R.D);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::rightTimes(const Tensor& m, const Tensor& e) const {
    return red_.multiply(m, red_.identityTimes(e, m.legs()));
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::leftTimes(const Tensor& e, const Tensor& m) const {
    return red_.multiply(red_.identityTimes(e, m.legs()), m);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::power(int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    if (n == 0) return I();
    if (n == 1) return M();
    BmwWord w;
    for (int k = 1; k < n; ++k) w.push_back(sigma(k));
    return descendant(w, n);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::g() const {
    return params().eta.inverse() * ch(BmwWord{kappa(1)}, 2);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::p(int i) const {
    if (i < 0) throw std::invalid_argument("negative index");
    if (i == 0) return trR(I());
    if (i == 1) return trR(M());
    BmwWord w;
    for (int k = 1; k < i; ++k) w.push_back(sigma(k));
    return ch(w, i);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::a(int i) const {
    if (i < 0) throw std::invalid_argument("negative index");
    if (i == 0) return element(S(1));
    return ch(rep_.antisymmetrizer(i, i));
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::s(int i) const {
    if (i < 0) throw std::invalid_argument("negative index");
    if (i == 0) return element(S(1));
    return ch(rep_.symmetrizer(i, i));
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::gPower(int j) const {
    Tensor out = element(S(1));
    if (j == 0) return out;
    Tensor gg = g();
    for (int k = 0; k < j; ++k) out = red_.multiply(out, gg);
    return out;
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::mt(const Tensor& n) const {
    return red_.multiply(M(), red_.apply(xi_, n));
}

template <class S>
bool QuantumMatrixAlgebra<S>::antisymAdmissible(int i) const {
    return checkAdmissible(params(), i, Side::Antisym).ok;
}

template <class S>
bool QuantumMatrixAlgebra<S>::symAdmissible(int i) const {
    return checkAdmissible(params(), i, Side::Sym).ok;
}

template <class S>
TensorOperator<S> QuantumMatrixAlgebra<S>::antisymShifted(int i, int shift, int n) const {
    return shiftUp(rep_.antisymmetrizer(i, i), shift, n);
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::A(int m, int i) const {
    if (m < -1 || i < 0) throw std::invalid_argument("A(m,i) needs m >= -1, i >= 0");
    if (i == 0) {
        if (m < 0) throw std::invalid_argument("A(-1,0) is not defined");
        return red_.zero(1, m);
    }
    const S iq = qNumber(i, params());
    if (m == -1) {
        // i_q phi^-1(Tr_R(2..i) M_2bar ... M_ibar rho(a^(i)))
        Tensor t = red_.times(red_.copiesProduct(2, i, i), rep_.antisymmetrizer(i, i));
        std::vector<int> rest;
        for (int l = 2; l <= i; ++l) rest.push_back(l);
        return iq * red_.apply(phiInv_, red_.weightedTrace(t, rest, pair_.R.D));
    }
    BmwWord tail;
    for (int k = m; k >= 1; --k) tail.push_back(sigma(k));
    const int n = m + i;
    return iq * descendant(antisymShifted(i, m, n) * rep_.represent(tail, n));
}

template <class S>
QmaTensor<S> QuantumMatrixAlgebra<S>::B(int m, int i) const {
    if (m < 0 || i < 0) throw std::invalid_argument("B(m,i) needs m, i >= 0");
    if (i == 0) return red_.zero(1, m);
    const S iq = qNumber(i, params());
    if (m == 0) return iq * red_.apply(phiInv_, red_.apply(xi_, descendant(rep_.antisymmetrizer(i, i))));
    BmwWord tail{kappa(m)};
    for (int k = m - 1; k >= 1; --k) tail.push_back(sigma(k));
    const int n = m + i;
    return iq * descendant(antisymShifted(i, m, n) * rep_.represent(tail, n));
}

#define QMBMW_INSTANTIATE(S)                                                                    \
    template class QmaTensor<S>;                                                                \
    template nlohmann::json tensorDiff(const QmaTensor<S>&, const QmaTensor<S>&, int);           \
    template class IdealReducer<S>;                                                             \
    template class QuantumMatrixAlgebra<S>;

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
