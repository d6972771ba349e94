#include "qmbmw/rmatrix.hpp"

#include <sstream>

namespace qmbmw {

Family parseFamily(const std::string& s) {
    if (s == "so" || s == "orthogonal") return Family::Orthogonal;
    if (s == "sp" || s == "symplectic") return Family::Symplectic;
    throw InvalidFamily("unknown family '" + s + "'");
}

std::string familyName(Family f) { return f == Family::Orthogonal ? "so" : "sp"; }

template <class S>
TensorOperator<S> skewInverse(const TensorOperator<S>& x) {
    using Op = TensorOperator<S>;
    if (x.legs() != 2) throw std::invalid_argument("skewInverse expects a 2-leg operator");
    const int N = x.dimV();
    const int N2 = N * N;
    // reshuffle: Xt[(i j),(b a)] = X[(i a),(j b)]
    Mat<S> xt(N2, N2);
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < N; ++a)
            for (const auto& e : x.row(i * N + a)) {
                int j = static_cast<int>(e.col) / N, b = static_cast<int>(e.col) % N;
                xt(i * N + j, b * N + a) = e.value;
            }
    auto inv = inverseOf(xt);
    if (!inv) throw NotSkewInvertible("reshuffled operator is singular");
    typename Op::Builder bld(N, 2);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int b = 0; b < N; ++b)
                for (int a = 0; a < N; ++a) bld.add(i * N + a, j * N + b, (*inv)(i * N + j, b * N + a));
    Op psi = bld.finish();
    auto lhs1 = partialTrace(embedAt(x, 1, 3) * embedAt(psi, 2, 3), {2});
    auto lhs2 = partialTrace(embedAt(psi, 1, 3) * embedAt(x, 2, 3), {2});
    auto p = Op::permutation(N);
    if (lhs1 != p || lhs2 != p) throw NotSkewInvertible("skew inverse fails its defining equations");
    return psi;
}

template <class S>
CDMatrices<S> cdMatrices(const TensorOperator<S>& x, const TensorOperator<S>& psi) {
    using Op = TensorOperator<S>;
    const int N = x.dimV();
    CDMatrices<S> cd{partialTrace(psi, {1}), partialTrace(psi, {2}), false};
    auto I1 = Op::identity(N, 1);
    if (partialTrace(embed(cd.C, {1}, 2) * x, {1}) != I1 || partialTrace(embed(cd.D, {2}, 2) * x, {2}) != I1)
        throw NotSkewInvertible("C/D fail the trace identities");
    cd.strict = inverse(cd.C).has_value() && inverse(cd.D).has_value();
    return cd;
}

template <class S>
TensorOperator<S> standardROperator(Family family, int N, const S& q) {
    using Op = TensorOperator<S>;
    if (family == Family::Orthogonal && N < 3) throw InvalidFamily("orthogonal family needs N >= 3");
    if (family == Family::Symplectic && (N < 2 || N % 2)) throw InvalidFamily("symplectic family needs even N >= 2");
    auto pr = [N](int i) { return N - 1 - i; };
    // doubled weights; for odd N the middle weight is shifted by 1/2, a diagonal change of basis
    // that keeps every entry in Q(q)
    std::vector<int> rho2(N), eps(N, 1);
    for (int i = 0; i < N; ++i) {
        if (family == Family::Orthogonal) {
            if (i < pr(i)) rho2[i] = N - 2 * (i + 1);
            else if (i == pr(i)) rho2[i] = 1;
            else rho2[i] = -(N - 2 * (pr(i) + 1));
        } else {
            int n = N / 2;
            rho2[i] = i < n ? 2 * (n - i) : -2 * (i - n + 1);
            eps[i] = i < n ? 1 : -1;
        }
    }
    const S qi = q.inverse(), lam = q - qi;
    typename Op::Builder b(N, 2);
    auto idx = [N](int i, int j) { return static_cast<typename Op::Index>(i * N + j); };
    // R_FRT as a map (row, col) of V⊗V; e_ij ⊗ e_kl contributes at row (i,k), col (j,l)
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            S c;
            if (i == j) c = i != pr(i) ? q : S(1);
            else if (j != pr(i)) c = S(1);
            else c = qi;
            b.add(idx(i, j), idx(i, j), c);
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < i; ++j) {
            b.add(idx(i, j), idx(j, i), lam);
            int e = (rho2[i] - rho2[j]) / 2;
            S c = -lam * power(q, e) * S(eps[i] * eps[j]);
            b.add(idx(i, pr(i)), idx(j, pr(j)), c);
        }
    return Op::permutation(N) * b.finish();
}

template <class S>
std::optional<S> extractMu(const TensorOperator<S>& r, const S& q) {
    using Op = TensorOperator<S>;
    const int N = r.dimV();
    auto I = Op::identity(N, 2);
    auto y = (q * I - r) * (q.inverse() * I + r);
    if (y.isZero()) return std::nullopt;
    auto ry = r * y;
    for (typename Op::Index i = 0; i < y.dim(); ++i) {
        if (y.row(i).empty()) continue;
        const auto& e = y.row(i).front();
        S mu = ry.at(i, e.col) / e.value;
        if (ry == mu * y) return mu;
        return std::nullopt;
    }
    return std::nullopt;
}

namespace {

template <class S>
BmwRMatrix<S> buildDerived(const TensorOperator<S>& r, const S& q, int maxOrder) {
    using Op = TensorOperator<S>;
    if (r.legs() != 2) throw ConstructionFailed("R must act on V⊗V");
    const int N = r.dimV();
    auto mu = extractMu(r, q);
    if (!mu) throw ConstructionFailed("no third eigenvalue: (qI-R)(I/q+R) is not an eigen-operator of R");
    BmwRMatrix<S> b;
    b.N = N;
    b.params = AlgebraParams<S>::make(q, *mu, maxOrder);
    b.R = r;
    auto ri = inverse(r);
    if (!ri) throw ConstructionFailed("R is not invertible");
    b.Rinv = *ri;
    auto I = Op::identity(N, 2);
    b.K = ((*mu * (q - q.inverse())).inverse()) * ((q * I - r) * (q.inverse() * I + r));
    b.psiR = skewInverse(r);
    auto cd = cdMatrices(r, b.psiR);
    b.C = cd.C;
    b.D = cd.D;
    auto ci = inverse(b.C), di = inverse(b.D);
    if (!ci || !di) throw ConstructionFailed("R is not strict skew invertible");
    b.Cinv = *ci;
    b.Dinv = *di;
    auto kp = b.K * Op::permutation(N);
    b.E = partialTrace(kp, {1});
    b.Einv = partialTrace(kp, {2});
    return b;
}

template <class S>
TensorOperator<S> on(const TensorOperator<S>& x, std::vector<int> legs, int n) {
    return embed(x, legs, n);
}

}  // namespace

template <class S>
BmwRMatrix<S> bmwFromOperator(const TensorOperator<S>& r, const S& q, int maxOrder) {
    BmwRMatrix<S> b;
    try {
        b = buildDerived(r, q, maxOrder);
    } catch (const ConstructionFailed&) {
        throw;
    } catch (const std::exception& e) {
        throw ConstructionFailed(e.what());
    }
    Report rep;
    Checker chk(rep, "construct", nlohmann::json::object());
    verifyBmwType(b, chk);
    if (rep.failures()) {
        std::ostringstream msg;
        msg << "BMW invariants failed:";
        for (const auto& rec : rep.records())
            if (rec.status == "fail") msg << ' ' << rec.check;
        throw ConstructionFailed(msg.str());
    }
    return b;
}

template <class S>
BmwRMatrix<S> makeStandardR(Family family, int N, const S& q, int maxOrder) {
    return bmwFromOperator(standardROperator(family, N, q), q, maxOrder);
}

template <class S>
void verifyBmwType(const BmwRMatrix<S>& b, Checker& chk) {
    using Op = TensorOperator<S>;
    const int N = b.N;
    const S q = b.params.q, qi = q.inverse(), mu = b.params.mu, eta = b.params.eta;
    const Op& R = b.R;
    const Op& K = b.K;
    auto I = Op::identity(N, 2);
    auto I1 = Op::identity(N, 1);
    auto P = Op::permutation(N);
    auto R1 = embedAt(R, 1, 3), R2 = embedAt(R, 2, 3);
    auto Ri1 = embedAt(b.Rinv, 1, 3), Ri2 = embedAt(b.Rinv, 2, 3);
    auto K1 = embedAt(K, 1, 3), K2 = embedAt(K, 2, 3);

    chk.equal("yang-baxter", "R1 R2 R1 = R2 R1 R2", R1 * R2 * R1, R2 * R1 * R2);
    chk.equal("char-cubic", "(qI-R)(I/q+R)(mu I-R) = 0", (q * I - R) * (qi * I + R) * (mu * I - R), Op(N, 2));
    chk.run("cubic-minimal", "no quadratic factor omitting q or mu annihilates R", [&]() -> std::optional<nlohmann::json> {
        auto f1 = (q * I - R) * (qi * I + R);
        auto f2 = (qi * I + R) * (mu * I - R);
        if (!f1.isZero() && !f2.isZero()) return std::nullopt;
        return nlohmann::json{{"vanishing", f1.isZero() ? "(qI-R)(I/q+R)" : "(I/q+R)(mu I-R)"}};
    });
    if (((q * I - R) * (mu * I - R)).isZero())
        chk.skip("cubic-minimal-neg-eigenspace", "(qI-R)(mu I-R) != 0",
                 "R has no -1/q eigenvector; the cubic holds with that eigenvalue of multiplicity zero");
    else
        chk.expect("cubic-minimal-neg-eigenspace", "(qI-R)(mu I-R) != 0", true);
    chk.equal("k-definition", "K = (qI-R)(I/q+R)/(mu (q-1/q))", K,
              (mu * (q - qi)).inverse() * ((q * I - R) * (qi * I + R)));
    chk.equal("rk-kr", "R K = K R", R * K, K * R);
    chk.equal("rk-mu", "R K = mu K", R * K, mu * K);
    chk.equal("bmw-ra+", "K2 K1 = R1 R2 K1", K2 * K1, R1 * R2 * K1);
    chk.equal("bmw-ra-", "K2 K1 = R1^-1 R2^-1 K1", K2 * K1, Ri1 * Ri2 * K1);
    chk.equal("bmw-ra-mirror+", "K1 K2 = R2 R1 K2", K1 * K2, R2 * R1 * K2);
    chk.equal("bmw-ra-mirror-", "K1 K2 = R2^-1 R1^-1 K2", K1 * K2, Ri2 * Ri1 * K2);
    chk.equal("bmw-rb", "K1 K2 K1 = K1", K1 * K2 * K1, K1);
    chk.equal("bmw-rb-mirror", "K2 K1 K2 = K2", K2 * K1 * K2, K2);
    chk.equal("bmw-2b+", "K1 R2 K1 = K1 / mu", K1 * R2 * K1, mu.inverse() * K1);
    chk.equal("bmw-2b-", "K1 R2^-1 K1 = mu K1", K1 * Ri2 * K1, mu * K1);
    chk.equal("k-squared", "K^2 = eta K", K * K, eta * K);
    chk.expect("rank-k", "rank K = 1", rankOf(K.toDense()) == 1, nlohmann::json{{"rank", rankOf(K.toDense())}});
    chk.equal("r-inverse", "R R^-1 = I", R * b.Rinv, I);
    chk.run("skew-inverse", "Tr_2 R_12 Psi_23 = Tr_2 Psi_12 R_23 = P_13", [&]() -> std::optional<nlohmann::json> {
        auto l1 = partialTrace(embedAt(R, 1, 3) * embedAt(b.psiR, 2, 3), {2});
        auto l2 = partialTrace(embedAt(b.psiR, 1, 3) * embedAt(R, 2, 3), {2});
        if (l1 == P && l2 == P) return std::nullopt;
        return operatorDiff(l1 == P ? l2 : l1, P);
    });
    chk.equal("trace-c", "Tr_1 C_1 R_12 = I_2", partialTrace(embed(b.C, {1}, 2) * R, {1}), I1);
    chk.equal("trace-d-r", "Tr_2 D_2 R_12 = I_1", partialTrace(embed(b.D, {2}, 2) * R, {2}), I1);
    chk.equal("strict-c", "C C^-1 = I", b.C * b.Cinv, I1);
    chk.equal("strict-d", "D D^-1 = I", b.D * b.Dinv, I1);
    chk.equal("c-d-product", "C D = mu^2 I", b.C * b.D, (mu * mu) * I1);
    chk.equal("d-c-product", "D C = mu^2 I", b.D * b.C, (mu * mu) * I1);
    chk.equal("trace-k-2", "Tr_2 K_12 = D_1 / mu", partialTrace(K, {2}), mu.inverse() * b.D);
    chk.equal("trace-k-1", "Tr_1 K_12 = C_2 / mu", partialTrace(K, {1}), mu.inverse() * b.C);
    chk.equal("trace-r-k", "Tr_R(2) K_12 = mu I", weightedTrace(K, {2}, b.D), mu * I1);
    chk.equal("trace-r-r", "Tr_R(2) R_12 = I", weightedTrace(R, {2}, b.D), I1);
    chk.equal("trace-r-identity", "Tr_R I = mu eta", weightedTrace(I1, {1}, b.D), Op::scalar(mu * eta));
    auto DD = embed(b.D, {1}, 2) * embed(b.D, {2}, 2);
    chk.equal("kdd", "K D1 D2 = mu^2 K", K * DD, (mu * mu) * K);
    chk.equal("ddk", "D1 D2 K = mu^2 K", DD * K, (mu * mu) * K);
    chk.equal("e-inverse", "E E^-1 = I", b.E * b.Einv, I1);
    chk.equal("e-inverse-left", "E^-1 E = I", b.Einv * b.E, I1);
    {
        const S two = qNumber(2, b.params);
        auto a2 = ((two * (mu + qi)).inverse()) * ((q * I - R) * (mu * I - R));
        auto s2 = ((two * (mu - q)).inverse()) * ((qi * I + R) * (mu * I - R));
        chk.equal("resolution", "a2 + s2 + K/eta = I", a2 + s2 + eta.inverse() * K, I);
    }
}

template <class S>
void verifyBmwOperator(const TensorOperator<S>& r, const S& q, Checker& chk) {
    BmwRMatrix<S> b;
    try {
        b = buildDerived(r, q, 4);
    } catch (const std::exception& e) {
        auto R1 = embedAt(r, 1, 3), R2 = embedAt(r, 2, 3);
        chk.equal("yang-baxter", "R1 R2 R1 = R2 R1 R2", R1 * R2 * R1, R2 * R1 * R2);
        nlohmann::json w = {{"error", e.what()}};
        chk.expect("char-cubic", "(qI-R)(I/q+R)(mu I-R) = 0", false, w);
        chk.expect("cubic-minimal", "no quadratic factor omitting q or mu annihilates R", false, w);
        return;
    }
    verifyBmwType(b, chk);
}

template <class S>
void verifyKIdentities(const BmwRMatrix<S>& b, int jMax, Checker& chk) {
    using Op = TensorOperator<S>;
    const int N = b.N;
    const S mu = b.params.mu;
    const Op& K = b.K;
    const auto P = Op::permutation(N);
    auto K_ = [&](int i, int j, int n) { return on(K, {i, j}, n); };
    auto P_ = [&](int i, int j, int n) { return on(P, {i, j}, n); };
    auto one = [&](const Op& x, int l, int n) { return on(x, {l}, n); };

    chk.equal("k12k23", "K12 K23 = E3 K12 P23 P12", K_(1, 2, 3) * K_(2, 3, 3),
              one(b.E, 3, 3) * K_(1, 2, 3) * P_(2, 3, 3) * P_(1, 2, 3));
    chk.equal("k23k12", "K23 K12 = E1^-1 K23 P12 P23", K_(2, 3, 3) * K_(1, 2, 3),
              one(b.Einv, 1, 3) * K_(2, 3, 3) * P_(1, 2, 3) * P_(2, 3, 3));
    chk.equal("k13k23", "K13 K23 = D2 K13 P12 / mu", K_(1, 3, 3) * K_(2, 3, 3),
              mu.inverse() * (one(b.D, 2, 3) * K_(1, 3, 3) * P_(1, 2, 3)));
    chk.equal("k12k13", "K12 K13 = C3 K12 P23 / mu", K_(1, 2, 3) * K_(1, 3, 3),
              mu.inverse() * (one(b.C, 3, 3) * K_(1, 2, 3) * P_(2, 3, 3)));
    auto k23k14 = K_(2, 3, 4) * K_(1, 4, 4);
    chk.equal("p-dressing-1", "K23 K14 P12 P34 = K23 K14", k23k14 * P_(1, 2, 4) * P_(3, 4, 4), k23k14);
    chk.equal("p-dressing-2", "K23 K14 P13 P24 = K23 K14 P23 P14", k23k14 * P_(1, 3, 4) * P_(2, 4, 4),
              k23k14 * P_(2, 3, 4) * P_(1, 4, 4));
    chk.equal("k-einv", "K12 E1^-1 = K12 P12 D1 / mu", K * one(b.Einv, 1, 2), mu.inverse() * (K * P * one(b.D, 1, 2)));
    chk.equal("e-k", "E1 K12 = D1 P12 K12 / mu", one(b.E, 1, 2) * K, mu.inverse() * (one(b.D, 1, 2) * P * K));
    auto EE = one(b.E, 1, 2) * one(b.E, 2, 2);
    chk.equal("k-ee", "K E1 E2 = K", K * EE, K);
    chk.equal("ee-k", "E1 E2 K = K", EE * K, K);
    chk.run("psi-k", "Psi_K = E1 K12 E2", [&]() -> std::optional<nlohmann::json> {
        auto psiK = skewInverse(K);
        auto rhs = one(b.E, 1, 2) * K * one(b.E, 2, 2);
        if (psiK == rhs) return std::nullopt;
        return operatorDiff(psiK, rhs);
    });
    chk.equal("psi-k-d", "E1 K12 E2 = D1 K21 D1 / mu^2", one(b.E, 1, 2) * K * one(b.E, 2, 2),
              (mu * mu).inverse() * (one(b.D, 1, 2) * (P * K * P) * one(b.D, 1, 2)));

    for (int j = 1; j <= jMax; ++j) {
        const int n = j + 1;
        const std::string tag = "[j=" + std::to_string(j) + "]";
        // K1 K2 ... Kj = E3 ... E_{j+1} (P1 ... Pj)^2 Kj
        {
            Op lhs = Op::identity(N, n), es = Op::identity(N, n), ps = Op::identity(N, n);
            for (int i = 1; i <= j; ++i) lhs = lhs * K_(i, i + 1, n);
            for (int i = 3; i <= j + 1; ++i) es = es * one(b.E, i, n);
            for (int i = 1; i <= j; ++i) ps = ps * P_(i, i + 1, n);
            chk.equal("k-string-up" + tag, "K1...Kj = E3...E_{j+1} (P1...Pj)^2 Kj", lhs, es * ps * ps * K_(j, j + 1, n));
        }
        // Kj ... K1 = E1^-1 ... E_{j-1}^-1 Kj (Pj ... P1)^2
        {
            Op lhs = Op::identity(N, n), es = Op::identity(N, n), ps = Op::identity(N, n);
            for (int i = j; i >= 1; --i) lhs = lhs * K_(i, i + 1, n);
            for (int i = 1; i <= j - 1; ++i) es = es * one(b.Einv, i, n);
            for (int i = j; i >= 1; --i) ps = ps * P_(i, i + 1, n);
            chk.equal("k-string-down" + tag, "Kj...K1 = E1^-1...E_{j-1}^-1 Kj (Pj...P1)^2", lhs, es * K_(j, j + 1, n) * ps * ps);
        }
        // legs labelled 0..j sit at positions 1..j+1
        {
            Op lhs = Op::identity(N, n), ds = Op::identity(N, n), ps = Op::identity(N, n);
            for (int i = 1; i <= j; ++i) lhs = lhs * K_(i + 1, 1, n);
            for (int i = 2; i <= j; ++i) ds = ds * one(b.D, i + 1, n);
            for (int i = 1; i <= j - 1; ++i) ps = ps * P_(i + 1, i + 2, n);
            chk.equal("k-string-i0" + tag, "K10 K20...Kj0 = mu^(1-j) D2...Dj P1...P_{j-1} Kj0", lhs,
                      power(mu, 1 - j) * (ds * ps * K_(j + 1, 1, n)));
        }
        {
            Op lhs = Op::identity(N, n), cs = Op::identity(N, n), ps = Op::identity(N, n);
            for (int i = 1; i <= j; ++i) lhs = lhs * K_(1, i + 1, n);
            for (int i = 2; i <= j; ++i) cs = cs * one(b.C, i + 1, n);
            for (int i = 1; i <= j - 1; ++i) ps = ps * P_(i + 1, i + 2, n);
            chk.equal("k-string-0i" + tag, "K01 K02...K0j = mu^(1-j) C2...Cj P1...P_{j-1} K0j", lhs,
                      power(mu, 1 - j) * (cs * ps * K_(1, j + 1, n)));
        }
    }
}

#define QMBMW_INSTANTIATE(S)                                                                      \
    template TensorOperator<S> skewInverse(const TensorOperator<S>&);                             \
    template CDMatrices<S> cdMatrices(const TensorOperator<S>&, const TensorOperator<S>&);        \
    template TensorOperator<S> standardROperator(Family, int, const S&);                          \
    template std::optional<S> extractMu(const TensorOperator<S>&, const S&);                      \
    template BmwRMatrix<S> bmwFromOperator(const TensorOperator<S>&, const S&, int);              \
    template BmwRMatrix<S> makeStandardR(Family, int, const S&, int);                             \
    template void verifyBmwType(const BmwRMatrix<S>&, Checker&);                                  \
    template void verifyBmwOperator(const TensorOperator<S>&, const S&, Checker&);                \
    template void verifyKIdentities(const BmwRMatrix<S>&, int, Checker&);

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
