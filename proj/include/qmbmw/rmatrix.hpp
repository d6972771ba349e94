#pragma once

#include "qmbmw/params.hpp"
#include "qmbmw/report.hpp"
#include "qmbmw/tensor_operator.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace qmbmw {

struct NotSkewInvertible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstructionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Family { Orthogonal, Symplectic };

Family parseFamily(const std::string& s);
std::string familyName(Family f);

// Psi_X with Tr_2 X_12 Psi_23 = Tr_2 Psi_12 X_23 = P_13.
template <class S>
TensorOperator<S> skewInverse(const TensorOperator<S>& x);

template <class S>
struct CDMatrices {
    TensorOperator<S> C;  // Tr_1 Psi
    TensorOperator<S> D;  // Tr_2 Psi
    bool strict = false;  // C and D invertible
};

// Asserts Tr_1 C_1 X_12 = I_2 and Tr_2 D_2 X_12 = I_1.
template <class S>
CDMatrices<S> cdMatrices(const TensorOperator<S>& x, const TensorOperator<S>& psi);

template <class S>
struct BmwRMatrix {
    int N = 0;
    TensorOperator<S> R, Rinv, K, psiR;
    TensorOperator<S> C, D, Cinv, Dinv;
    TensorOperator<S> E, Einv;
    AlgebraParams<S> params;
};

// Raw FRT-normalized operator (braid form, eigenvalues q, -1/q, mu).
template <class S>
TensorOperator<S> standardROperator(Family family, int N, const S& q);

// Third eigenvalue: R (qI-R)(I/q+R) = mu (qI-R)(I/q+R), or nothing.
template <class S>
std::optional<S> extractMu(const TensorOperator<S>& r, const S& q);

// Builds all derived objects and runs verifyBmwType; throws ConstructionFailed on any failure.
template <class S>
BmwRMatrix<S> bmwFromOperator(const TensorOperator<S>& r, const S& q, int maxOrder = 4);

template <class S>
BmwRMatrix<S> makeStandardR(Family family, int N, const S& q, int maxOrder = 4);

template <class S>
void verifyBmwType(const BmwRMatrix<S>& r, Checker& chk);

// For operators that may not be BMW at all (e.g. P, or a scaled R).
template <class S>
void verifyBmwOperator(const TensorOperator<S>& r, const S& q, Checker& chk);

template <class S>
void verifyKIdentities(const BmwRMatrix<S>& r, int jMax, Checker& chk);

}  // namespace qmbmw
