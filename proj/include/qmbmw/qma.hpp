#pragma once

#include "qmbmw/bmwrep.hpp"
#include "qmbmw/twistmaps.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace qmbmw {

struct DegreeOverflow : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// An operator on V^{⊗legs} whose entries lie in the degree-`degree` component of the
// free algebra on the N^2 generators M_a^b (label a*N+b), or of its quotient.
// Row (I*dim + J) of data() holds entry (I,J); its columns are coordinates either over all
// monomials (free) or over the standard monomials of the reducer (reduced).
// legs = 0 is a plain algebra element, legs = 1 a matrix of elements.
template <class S>
class QmaTensor {
public:
    using Index = std::uint32_t;

    QmaTensor() = default;
    QmaTensor(int dimV, int legs, int degree, int width, bool reduced);

    int dimV() const { return N_; }
    int legs() const { return n_; }
    int degree() const { return deg_; }
    int width() const { return static_cast<int>(data_.cols()); }
    bool reduced() const { return reduced_; }
    Index dim() const { return dim_; }
    Mat<S>& data() { return data_; }
    const Mat<S>& data() const { return data_; }
    const S* entry(Index i, Index j) const { return data_.row(static_cast<Eigen::Index>(i) * dim_ + j).data(); }
    S* entry(Index i, Index j) { return data_.row(static_cast<Eigen::Index>(i) * dim_ + j).data(); }
    bool entryIsZero(Index i, Index j) const;
    bool isZero() const;

    QmaTensor& operator+=(const QmaTensor& o);
    QmaTensor& operator-=(const QmaTensor& o);
    QmaTensor& operator*=(const S& s);
    friend QmaTensor operator+(QmaTensor a, const QmaTensor& b) { return a += b; }
    friend QmaTensor operator-(QmaTensor a, const QmaTensor& b) { return a -= b; }
    friend QmaTensor operator*(const S& s, QmaTensor a) { return a *= s; }
    friend bool operator==(const QmaTensor& a, const QmaTensor& b) { return a.equals(b); }
    friend bool operator!=(const QmaTensor& a, const QmaTensor& b) { return !a.equals(b); }
    bool equals(const QmaTensor& o) const;

private:
    void checkShape(const QmaTensor& o) const;
    int N_ = 0, n_ = 0, deg_ = 0;
    Index dim_ = 1;
    bool reduced_ = true;
    Mat<S> data_;
};

template <class S>
using QmaElement = QmaTensor<S>;
template <class S>
using QmaMatrixElement = QmaTensor<S>;

// up to three differing entries with their nonzero coordinates
template <class S>
nlohmann::json tensorDiff(const QmaTensor<S>& a, const QmaTensor<S>& b, int maxEntries = 3);

// Degree-by-degree model of M(R,F): the quotient of the free algebra by the two-sided ideal
// generated by the entries of R_1 M_1bar M_2bar - M_1bar M_2bar R_1.
// The annihilator of the ideal is built recursively,
//   Ann_n = (Ann_{n-1} ⊗ V*) ∩ (V*^{⊗(n-2)} ⊗ Ann_2),
// and kept in reduced echelon form; its pivot columns are the standard monomials and
// applying it to a free vector gives the normal form in that basis.
template <class S>
class IdealReducer {
public:
    using Op = TensorOperator<S>;
    using Tensor = QmaTensor<S>;

    IdealReducer(const CompatiblePair<S>& pair, int maxDegree);

    const CompatiblePair<S>& pair() const { return pair_; }
    int dimV() const { return N_; }
    int generators() const { return N_ * N_; }
    int maxDegree() const { return maxDegree_; }
    int dim(int degree) const;
    std::vector<int> dims() const;
    std::uint64_t monomials(int degree) const;
    const std::vector<std::uint64_t>& standardMonomials(int degree) const;
    // d_n x (N^2)^n; column m is the normal form of monomial m
    const Mat<S>& normalForms(int degree) const;
    // all entries of R_1 M_1bar M_2bar - M_1bar M_2bar R_1 as rows over degree-2 monomials
    const Mat<S>& relationEntries() const { return relEntries_; }
    int relationRank() const { return static_cast<int>(relBasis_.rows()); }

    Vec<S> reduceVector(int degree, const Vec<S>& free) const;
    Tensor reduce(const Tensor& free) const;

    // degree-0 tensor of a scalar operator
    Tensor scalar(const Op& x) const;
    Tensor identity(int legs) const { return scalar(Op::identity(N_, legs)); }
    Tensor zero(int legs, int degree) const;
    // I on `legs` legs with entries e (a 0-leg tensor)
    Tensor identityTimes(const Tensor& e, int legs) const;
    // M_1 on `legs` legs (degree 1)
    Tensor generatorMatrix(int legs) const;
    // M_ibar on `legs` legs: M_1bar = M_1, M_ibar = F_{i-1} M_{i-1 bar} F_{i-1}^-1
    Tensor copy(int i, int legs) const;
    // M_{from bar} ... M_{to bar} on `legs` legs, reduced; the full product 1..legs is cached
    Tensor copiesProduct(int from, int to, int legs) const;

    Tensor multiply(const Tensor& a, const Tensor& b) const;
    Tensor times(const Op& x, const Tensor& t) const;
    Tensor times(const Tensor& t, const Op& x) const;
    // T ⊗ I on legs t.legs()+1 .. legs
    Tensor embed(const Tensor& t, int legs) const;
    // trace over `traced` legs (1-based), each weighted by the one-leg operator `weight`
    Tensor weightedTrace(const Tensor& t, const std::vector<int>& traced, const Op& weight) const;
    // entrywise action of a scalar linear map on a one-leg tensor
    Tensor apply(const MatrixLinearMap<S>& f, const Tensor& t) const;

private:
    struct SparseColumn {
        std::vector<std::pair<int, S>> entries;
    };
    using MulTable = std::vector<SparseColumn>;
    void buildDegree(int n);
    const MulTable& mulTable(int a, int b) const;
    void checkDegree(int n) const;

    const CompatiblePair<S>& pair_;
    int N_ = 0;
    int maxDegree_ = 0;
    Mat<S> relEntries_, relBasis_;
    std::vector<Mat<S>> nf_;
    std::vector<std::vector<std::uint64_t>> std_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, MulTable> mul_;
    mutable std::map<std::pair<int, int>, Tensor> copies_;
    mutable std::map<int, Tensor> products_;
};

// Characteristic subalgebra, matrix descendants and the BMW-case machinery on top of a reducer.
template <class S>
class QuantumMatrixAlgebra {
public:
    using Op = TensorOperator<S>;
    using Tensor = QmaTensor<S>;

    QuantumMatrixAlgebra(const CompatiblePair<S>& pair, int maxDegree);

    const IdealReducer<S>& reducer() const { return red_; }
    const Representation<S>& rep() const { return rep_; }
    const CompatiblePair<S>& pair() const { return pair_; }
    const AlgebraParams<S>& params() const { return pair_.R.params; }
    int maxDegree() const { return red_.maxDegree(); }
    int dimV() const { return red_.dimV(); }

    Tensor element(const S& s) const;  // degree 0
    // Tr_R(1..n) M_1bar ... M_nbar X
    Tensor ch(const Op& x) const;
    Tensor ch(const BmwWord& w, int n) const { return ch(rep_.represent(w, n)); }
    // (M^X)_1 = Tr_R(2..n) M_1bar ... M_nbar X
    Tensor descendant(const Op& x) const;
    Tensor descendant(const BmwWord& w, int n) const { return descendant(rep_.represent(w, n)); }
    // R-trace of a one-leg tensor
    Tensor trR(const Tensor& m) const;
    Tensor mul(const Tensor& a, const Tensor& b) const { return red_.multiply(a, b); }
    // entrywise products m.e and e.m with an element e
    Tensor rightTimes(const Tensor& m, const Tensor& e) const;
    Tensor leftTimes(const Tensor& e, const Tensor& m) const;
    Tensor identityTimes(const Tensor& e) const { return red_.identityTimes(e, 1); }

    Tensor M() const { return red_.generatorMatrix(1); }
    Tensor I() const { return red_.identity(1); }
    Tensor power(int n) const;  // M^{n bar}
    Tensor g() const;           // 2-contraction
    Tensor p(int i) const;      // power sums, p_0 = Tr_R I
    Tensor a(int i) const;      // ch(a^(i)), a_0 = 1
    Tensor s(int i) const;      // ch(s^(i)), s_0 = 1
    Tensor gPower(int j) const;
    Tensor mt(const Tensor& n) const;  // M . xi(N)
    // descendants of M^{a^(i)}; m = -1 for A and m = 0 for B use the boundary formulas
    Tensor A(int m, int i) const;
    Tensor B(int m, int i) const;
    bool antisymAdmissible(int i) const;
    bool symAdmissible(int i) const;

    const MatrixLinearMap<S>& phi() const { return phi_; }
    const MatrixLinearMap<S>& phiInv() const { return phiInv_; }
    const MatrixLinearMap<S>& xi() const { return xi_; }
    const MatrixLinearMap<S>& theta() const { return theta_; }
    const MatrixLinearMap<S>& thetaInv() const { return thetaInv_; }

private:
    // rho(a^(i)) moved up by `shift` legs, on n legs
    Op antisymShifted(int i, int shift, int n) const;

    const CompatiblePair<S>& pair_;
    Representation<S> rep_;
    IdealReducer<S> red_;
    MatrixLinearMap<S> phi_, phiInv_, xi_, theta_, thetaInv_;
};

template <class S>
void verifyReducer(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyCopies(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyCharacteristic(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyDescendants(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyStarIdentities(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyMt(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyLemma51(const QuantumMatrixAlgebra<S>& qa, Checker& chk);
template <class S>
void verifyNewtonWronski(const QuantumMatrixAlgebra<S>& qa, int nMax, Checker& chk);
template <class S>
void verifyInversionIdentities(const QuantumMatrixAlgebra<S>& qa, Checker& chk);

// 81 - rank of Z -> R Z - Z R_f on End(V⊗V): the expected degree-2 dimension
template <class S>
int degreeTwoRankOracle(const CompatiblePair<S>& pair);
// r_a^2 + r_s^2 + 1 from the ranks of rho(a^(2)) and rho(s^(2))
template <class S>
int degreeTwoSpectralOracle(const Representation<S>& rep);

}  // namespace qmbmw
