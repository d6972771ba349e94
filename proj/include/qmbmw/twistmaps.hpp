#pragma once

#include "qmbmw/report.hpp"
#include "qmbmw/rmatrix.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace qmbmw {

struct NotCompatible : std::runtime_error {
    NotCompatible(const std::string& what, nlohmann::json w) : std::runtime_error(what), witness(std::move(w)) {}
    nlohmann::json witness;
};
struct FNotStrict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {R, F}: R1 F2 F1 = F2 F1 R2 and R2 F1 F2 = F1 F2 R1, F a strict skew invertible R-matrix.
template <class S>
struct CompatiblePair {
    BmwRMatrix<S> R;
    TensorOperator<S> F, Finv, psiF, CF, DF, CFinv, DFinv;
    // skew data of F^-1
    TensorOperator<S> psiFinv, CFi, DFi;
    BmwRMatrix<S> Rf;  // F^-1 R F
    std::string label;
};

template <class S>
CompatiblePair<S> makePair(const BmwRMatrix<S>& r, const TensorOperator<S>& f, std::string label = "");

// F^-1 R F as a BMW R-matrix
template <class S>
BmwRMatrix<S> twist(const CompatiblePair<S>& pair);

template <class S>
std::optional<nlohmann::json> twistRelationsWitness(const TensorOperator<S>& r, const TensorOperator<S>& f);

template <class S>
void verifyTwistCalculus(const CompatiblePair<S>& pair, std::uint64_t seed, Checker& chk);

template <class S>
struct GPair {
    TensorOperator<S> G, Ginv;
};

// G_1 = Tr_23 K_2 F_1^-1 F_2^-1,  G_1^-1 = Tr_23 F_2 F_1 K_2
template <class S>
GPair<S> operatorG(const CompatiblePair<S>& pair);

template <class S>
void verifyOperatorG(const CompatiblePair<S>& pair, Checker& chk);

// Linear map on N x N matrices, stored as L[(a,b),(d,c)] = f(E_dc)_ab so that
// f(M)_ab = sum_dc L[(a,b),(d,c)] M_dc; this also acts on matrices with noncommuting entries.
template <class S>
class MatrixLinearMap {
public:
    MatrixLinearMap() = default;
    explicit MatrixLinearMap(int n) : n_(n), coeff_(Mat<S>::Zero(n * n, n * n)) {}
    static MatrixLinearMap identity(int n);
    // built from the action on matrix units; f maps a 1-leg operator to a 1-leg operator
    static MatrixLinearMap fromAction(int n, const std::function<TensorOperator<S>(const TensorOperator<S>&)>& f);
    // M -> A M B
    static MatrixLinearMap sandwich(const TensorOperator<S>& a, const TensorOperator<S>& b);

    int dimV() const { return n_; }
    const Mat<S>& coeff() const { return coeff_; }
    Mat<S>& coeff() { return coeff_; }
    const S& at(int a, int b, int d, int c) const { return coeff_(a * n_ + b, d * n_ + c); }

    TensorOperator<S> apply(const TensorOperator<S>& m) const;
    std::optional<MatrixLinearMap> inverse() const;

    friend MatrixLinearMap operator*(const MatrixLinearMap& f, const MatrixLinearMap& g) {
        MatrixLinearMap out(f.n_);
        out.coeff_ = f.coeff_ * g.coeff_;
        return out;
    }
    friend MatrixLinearMap operator*(const S& s, MatrixLinearMap f) {
        f.coeff_ *= s;
        return f;
    }
    friend bool operator==(const MatrixLinearMap& f, const MatrixLinearMap& g) { return f.n_ == g.n_ && f.coeff_ == g.coeff_; }
    friend bool operator!=(const MatrixLinearMap& f, const MatrixLinearMap& g) { return !(f == g); }

private:
    int n_ = 0;
    Mat<S> coeff_;
};

template <class S>
nlohmann::json mapDiff(const MatrixLinearMap<S>& f, const MatrixLinearMap<S>& g, int maxEntries = 3);

// phi(M)_1 = Tr_R(2) F M_1 F^-1 R;  xi: K in place of R;  theta(M)_1 = Tr_R(2) K F M_1 F^-1 / mu^2
template <class S>
MatrixLinearMap<S> mapPhi(const CompatiblePair<S>& pair);
template <class S>
MatrixLinearMap<S> mapXi(const CompatiblePair<S>& pair);
template <class S>
MatrixLinearMap<S> mapTheta(const CompatiblePair<S>& pair);
// explicit inverse formulas, weighted with D of R_f
template <class S>
MatrixLinearMap<S> mapPhiInv(const CompatiblePair<S>& pair);
template <class S>
MatrixLinearMap<S> mapXiInv(const CompatiblePair<S>& pair);
template <class S>
MatrixLinearMap<S> mapThetaInv(const CompatiblePair<S>& pair);

template <class S>
void verifyMaps(const CompatiblePair<S>& pair, std::uint64_t seed, Checker& chk);

// random N x N matrix with small rational entries
template <class S>
TensorOperator<S> randomMatrix(int n, std::mt19937_64& rng);

}  // namespace qmbmw
