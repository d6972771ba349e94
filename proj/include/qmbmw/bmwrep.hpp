#pragma once

#include "qmbmw/report.hpp"
#include "qmbmw/rmatrix.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace qmbmw {

struct SpectralPole : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Gen : std::uint8_t { Sigma, SigmaInv, Kappa };

struct Letter {
    Gen g = Gen::Sigma;
    int i = 1;
    auto operator<=>(const Letter&) const = default;
};

using BmwWord = std::vector<Letter>;

inline Letter sigma(int i) { return {Gen::Sigma, i}; }
inline Letter sigmaInv(int i) { return {Gen::SigmaInv, i}; }
inline Letter kappa(int i) { return {Gen::Kappa, i}; }

// the antiautomorphism: letters reversed, each letter fixed
BmwWord reverse(const BmwWord& w);
BmwWord shiftUp(const BmwWord& w, int k);
// group inverse of a braid word; throws on kappa letters
BmwWord invertWord(const BmwWord& w);
// tau^(1) = 1, tau^(j+1) = tau^(j) s_j s_{j-1} ... s_1
BmwWord tauWord(int n);
int maxLeg(const BmwWord& w);
std::string wordString(const BmwWord& w);
BmwWord parseWord(const std::string& s);

// Formal Scalar-linear combination of words.
template <class S>
class BmwCombination {
public:
    BmwCombination() = default;
    static BmwCombination unit() { return word({}); }
    static BmwCombination word(const BmwWord& w, const S& c = S(1));

    const std::map<BmwWord, S>& terms() const { return terms_; }
    BmwCombination& operator+=(const BmwCombination& o);
    BmwCombination& operator*=(const S& s);
    friend BmwCombination operator+(BmwCombination a, const BmwCombination& b) { return a += b; }
    friend BmwCombination operator*(const S& s, BmwCombination a) { return a *= s; }
    friend BmwCombination operator*(const BmwCombination& a, const BmwCombination& b) { return multiply(a, b); }
    static BmwCombination multiply(const BmwCombination& a, const BmwCombination& b);

    BmwCombination reversed() const;
    BmwCombination shifted(int k) const;
    int maxLeg() const;

private:
    std::map<BmwWord, S> terms_;
};

// 1 + (x-1)/(q-1/q) s_i + (x-1)/(alpha x + 1) k_i,  alpha = -eps q^(-eps) / mu
template <class S>
BmwCombination<S> baxterized(int i, int eps, const S& x, const AlgebraParams<S>& p);

// Image of the BMW algebra under R. Generator images and idempotents are cached;
// the cache is safe for concurrent readers.
template <class S>
class Representation {
public:
    using Op = TensorOperator<S>;
    explicit Representation(const BmwRMatrix<S>& r) : r_(r) {}

    const BmwRMatrix<S>& rmatrix() const { return r_; }
    int dimV() const { return r_.N; }

    Op gen(Letter l, int n) const;
    Op represent(const BmwWord& w, int n) const;
    Op represent(const BmwCombination<S>& c, int n) const;
    Op baxterized(int i, int eps, const S& x, int n) const;

    // variant 1: a(k) s_k(..) a(k); variant 2: a(k)^1 s_1(..) a(k)^1
    Op antisymmetrizer(int order, int n, int variant = 1) const;
    Op symmetrizer(int order, int n, int variant = 1) const;
    // the antisymmetrizer recursion evaluated with arbitrary parameters (q, mu)
    Op antisymmetrizerWith(const AlgebraParams<S>& p, int order, int n, int variant = 1) const;
    // c^(2) = K_1/eta, c^(2i+2) = c^(2i)^1 K_1 K_{2i+1} c^(2i)^1; twoI = 0 gives the identity
    Op contractor(int twoI, int n) const;
    // c^(2i) = c^(2i-2)^1 (K_{2i-1} ... K_{i+1}) (K_1 ... K_i) / eta
    Op contractorChain(int twoI, int n) const;

private:
    enum class Kind { A, Sy, C };
    Op cached(Kind k, int order, int variant) const;
    Op build(Kind k, int order, int variant) const;
    // order k -> k+1, both native on their own legs
    Op step(const AlgebraParams<S>& p, int eps, const Op& prev, int k, int variant) const;

    const BmwRMatrix<S>& r_;
    mutable std::shared_mutex mu_;
    mutable std::map<std::tuple<int, int, int>, Op> idem_;
    mutable std::map<std::tuple<int, int, int>, Op> gens_;
};

// symbolic forms, used for the reversal checks
template <class S>
BmwCombination<S> antisymmetrizerWord(int order, const AlgebraParams<S>& p);
template <class S>
BmwCombination<S> symmetrizerWord(int order, const AlgebraParams<S>& p);
template <class S>
BmwCombination<S> contractorWord(int twoI, const AlgebraParams<S>& p);
template <class S>
BmwCombination<S> contractorChainWord(int twoI, const AlgebraParams<S>& p);

template <class S>
void verifyRepresentation(const Representation<S>& rep, std::uint64_t seed, Checker& chk);
template <class S>
void verifyProposition22(const Representation<S>& rep, int nMax, Checker& chk);
template <class S>
void verifyMorphisms(const Representation<S>& rep, int nMax, Checker& chk);
template <class S>
void verifyAppendices(const Representation<S>& rep, int jMax, Checker& chk);

}  // namespace qmbmw
