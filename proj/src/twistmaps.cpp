#include "qmbmw/twistmaps.hpp"

namespace qmbmw {

namespace {

template <class S>
TensorOperator<S> at1(const TensorOperator<S>& x, int l, int n) {
    return embed(x, {l}, n);
}

template <class S>
TensorOperator<S> at2(const TensorOperator<S>& x, int i, int j, int n) {
    return embed(x, {i, j}, n);
}

template <class S>
std::optional<nlohmann::json> firstMismatch(const std::vector<std::pair<TensorOperator<S>, TensorOperator<S>>>& pairs) {
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].first != pairs[k].second)
            return nlohmann::json{{"equation", k + 1}, {"entries", operatorDiff(pairs[k].first, pairs[k].second)}};
    return std::nullopt;
}

template <class S>
S traceOf(const TensorOperator<S>& x) {
    return partialTrace(x, {1}).scalarValue();
}

}  // namespace

template <class S>
TensorOperator<S> randomMatrix(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    Mat<S> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = fromRational<S>(Rational(num(rng), den(rng)));
    return TensorOperator<S>::fromDense(n, 1, m);
}

template <class S>
std::optional<nlohmann::json> twistRelationsWitness(const TensorOperator<S>& r, const TensorOperator<S>& f) {
    auto R1 = embedAt(r, 1, 3), R2 = embedAt(r, 2, 3), F1 = embedAt(f, 1, 3), F2 = embedAt(f, 2, 3);
    return firstMismatch<S>({{R1 * F2 * F1, F2 * F1 * R2}, {R2 * F1 * F2, F1 * F2 * R1}});
}

template <class S>
CompatiblePair<S> makePair(const BmwRMatrix<S>& r, const TensorOperator<S>& f, std::string label) {
    using Op = TensorOperator<S>;
    if (f.legs() != 2 || f.dimV() != r.N) throw std::invalid_argument("F must act on V⊗V with the same V as R");
    if (auto w = twistRelationsWitness(r.R, f)) throw NotCompatible("twist relations fail", *w);
    auto F1 = embedAt(f, 1, 3), F2 = embedAt(f, 2, 3);
    if (F1 * F2 * F1 != F2 * F1 * F2) throw NotCompatible("F does not satisfy Yang-Baxter", operatorDiff(F1 * F2 * F1, F2 * F1 * F2));
    CompatiblePair<S> p;
    p.R = r;
    p.F = f;
    p.label = std::move(label);
    auto fi = inverse(f);
    if (!fi) throw FNotStrict("F is not invertible");
    p.Finv = *fi;
    try {
        p.psiF = skewInverse(f);
        auto cd = cdMatrices(f, p.psiF);
        if (!cd.strict) throw FNotStrict("C_F or D_F is singular");
        p.CF = cd.C;
        p.DF = cd.D;
        p.CFinv = *inverse(p.CF);
        p.DFinv = *inverse(p.DF);
        p.psiFinv = skewInverse(p.Finv);
        auto cdi = cdMatrices(p.Finv, p.psiFinv);
        p.CFi = cdi.C;
        p.DFi = cdi.D;
    } catch (const NotSkewInvertible& e) {
        throw FNotStrict(e.what());
    }
    p.Rf = bmwFromOperator(Op(p.Finv * r.R * f), r.params.q, r.params.maxOrder);
    return p;
}

template <class S>
BmwRMatrix<S> twist(const CompatiblePair<S>& pair) {
    return pair.Rf;
}

template <class S>
void verifyTwistCalculus(const CompatiblePair<S>& pr, std::uint64_t seed, Checker& chk) {
    using Op = TensorOperator<S>;
    const auto& R = pr.R;
    const auto& Rf = pr.Rf;
    const Op& F = pr.F;
    const Op& Fi = pr.Finv;
    const int N = R.N;

    chk.expect("twist-relations", "R1 F2 F1 = F2 F1 R2, R2 F1 F2 = F1 F2 R1", !twistRelationsWitness(R.R, F).has_value());
    chk.run("twist-relations-inverse", "{R^-1, F} and {R, F^-1} are compatible", [&]() -> std::optional<nlohmann::json> {
        if (auto w = twistRelationsWitness(R.Rinv, F)) return w;
        return twistRelationsWitness(R.R, Fi);
    });
    {
        auto X1 = embedAt(Rf.R, 1, 3), X2 = embedAt(Rf.R, 2, 3);
        chk.equal("rf-yang-baxter", "Rf1 Rf2 Rf1 = Rf2 Rf1 Rf2", X1 * X2 * X1, X2 * X1 * X2);
    }
    chk.run("rf-compatible", "{Rf, F} is compatible", [&] { return twistRelationsWitness(Rf.R, F); });
    chk.equal("rf-definition", "Rf = F^-1 R F", Rf.R, Fi * R.R * F);
    chk.run("cd-twist", "C_Rf = C_(F^-1) D_R C_F, D_Rf = D_(F^-1) C_R D_F", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{Rf.C, pr.CFi * R.D * pr.CF}, {Rf.D, pr.DFi * R.C * pr.DF}});
    });
    {
        Op Rff = Fi * Rf.R * F;
        auto DD = at1(pr.DF, 1, 2) * at1(pr.DF, 2, 2), CC = at1(pr.CF, 1, 2) * at1(pr.CF, 2, 2);
        chk.run("rcdm", "D1 D2 (Rf)f = R D1 D2 and C1 C2 (Rf)f = R C1 C2 with C, D of F", [&]() -> std::optional<nlohmann::json> {
            return firstMismatch<S>({{DD * Rff, R.R * DD}, {CC * Rff, R.R * CC}});
        });
        Op g = pr.CFinv * pr.DF;
        Op gg = at1(g, 1, 2) * at1(g, 2, 2);
        chk.equal("rgrel", "[R, (C_F^-1 D_F)_1 (C_F^-1 D_F)_2] = 0", R.R * gg, gg * R.R);
    }
    chk.equal("rf-fin", "Rf_12 = Tr_34 F^-1_32 C_(F^-1)_3 R_34 D_F_4 F_14",
              partialTrace(at2(Fi, 3, 2, 4) * at1(pr.CFi, 3, 4) * at2(R.R, 3, 4, 4) * at1(pr.DF, 4, 4) * at2(F, 1, 4, 4), {3, 4}), Rf.R);
    chk.equal("psi-rf", "Psi_Rf_12 = C_(F^-1)_2 Tr_34(F^-1_23 Psi_R_34 F_41) D_F_1",
              at1(pr.CFi, 2, 2) * partialTrace(at2(Fi, 2, 3, 4) * at2(R.psiR, 3, 4, 4) * at2(F, 4, 1, 4), {3, 4}) * at1(pr.DF, 1, 2), Rf.psiR);
    chk.equal("psi-rf-another", "Psi_Rf_12 = C_(F^-1)_2 F_21 D_(F^-1)_2 Psi_R_12 C_F_1 F^-1_21 D_F_1",
              at1(pr.CFi, 2, 2) * at2(F, 2, 1, 2) * at1(pr.DFi, 2, 2) * R.psiR * at1(pr.CF, 1, 2) * at2(Fi, 2, 1, 2) * at1(pr.DF, 1, 2), Rf.psiR);

    struct Skew {
        const char* name;
        Op C, D, Cinv, Dinv;
    };
    const std::vector<Skew> xs = {{"R", R.C, R.D, R.Cinv, R.Dinv}, {"F", pr.CF, pr.DF, pr.CFinv, pr.DFinv}, {"Rf", Rf.C, Rf.D, Rf.Cinv, Rf.Dinv}};
    std::mt19937_64 rng(seed);
    auto I1 = Op::identity(N, 1);
    for (const auto& x : xs) {
        const std::string tx = std::string("[X=") + x.name + "]";
        for (int t = 0; t < 5; ++t) {
            Op M = randomMatrix<S>(N, rng);
            for (int eps : {1, -1}) {
                const Op& Fe = eps > 0 ? F : Fi;
                const Op& Fm = eps > 0 ? Fi : F;
                const std::string tg = tx + "[eps=" + std::to_string(eps) + ",t=" + std::to_string(t) + "]";
                chk.equal("inv-trC" + tg, "Tr_1 C_X1 F^e M_2 F^-e = I tr(C_X M)", partialTrace(at1(x.C, 1, 2) * Fe * at1(M, 2, 2) * Fm, {1}),
                          traceOf(Op(x.C * M)) * I1);
                chk.equal("inv-trD" + tg, "Tr_2 D_X2 F^-e M_1 F^e = I tr(D_X M)", partialTrace(at1(x.D, 2, 2) * Fm * at1(M, 1, 2) * Fe, {2}),
                          traceOf(Op(x.D * M)) * I1);
            }
        }
        Op Fi21 = at2(Fi, 2, 1, 2);
        chk.run("psi-C" + tx, "C_X1 Psi_F = F^-1_21 C_X2, Psi_F C_X1 = C_X2 F^-1_21", [&]() -> std::optional<nlohmann::json> {
            return firstMismatch<S>({{at1(x.C, 1, 2) * pr.psiF, Fi21 * at1(x.C, 2, 2)}, {pr.psiF * at1(x.C, 1, 2), at1(x.C, 2, 2) * Fi21}});
        });
        chk.run("psi-D" + tx, "Psi_F D_X2 = D_X1 F^-1_21, D_X2 Psi_F = F^-1_21 D_X1", [&]() -> std::optional<nlohmann::json> {
            return firstMismatch<S>({{pr.psiF * at1(x.D, 2, 2), at1(x.D, 1, 2) * Fi21}, {at1(x.D, 2, 2) * pr.psiF, Fi21 * at1(x.D, 1, 2)}});
        });
        chk.run("CxDf" + tx, "Tr_1 C_X1 F^-1 = (C_X D_F)_2 = (D_F C_X)_2", [&]() -> std::optional<nlohmann::json> {
            Op l = partialTrace(at1(x.C, 1, 2) * Fi, {1});
            return firstMismatch<S>({{l, x.C * pr.DF}, {l, pr.DF * x.C}});
        });
        chk.run("DxCf" + tx, "Tr_2 D_X2 F^-1 = (C_F D_X)_1 = (D_X C_F)_1", [&]() -> std::optional<nlohmann::json> {
            Op l = partialTrace(at1(x.D, 2, 2) * Fi, {2});
            return firstMismatch<S>({{l, pr.CF * x.D}, {l, x.D * pr.CF}});
        });
        chk.run("CF-commute" + tx, "C_X C_F = C_F C_X, D_X D_F = D_F D_X", [&]() -> std::optional<nlohmann::json> {
            return firstMismatch<S>({{x.C * pr.CF, pr.CF * x.C}, {x.D * pr.DF, pr.DF * x.D}});
        });
        for (const auto& y : xs) {
            const std::string txy = std::string("[X=") + x.name + ",Y=" + y.name + "]";
            chk.run("FCC" + txy, "F C_X1 C_Y2 = C_Y1 C_X2 F, F D_X1 D_Y2 = D_Y1 D_X2 F", [&]() -> std::optional<nlohmann::json> {
                return firstMismatch<S>({{F * at1(x.C, 1, 2) * at1(y.C, 2, 2), at1(y.C, 1, 2) * at1(x.C, 2, 2) * F},
                                         {F * at1(x.D, 1, 2) * at1(y.D, 2, 2), at1(y.D, 1, 2) * at1(x.D, 2, 2) * F}});
            });
            chk.run("FCD" + txy, "F (C_X D_Y)_2 = (C_X D_Y)_1 F, F (D_Y C_X)_1 = (D_Y C_X)_2 F", [&]() -> std::optional<nlohmann::json> {
                Op cd = x.C * y.D, dc = y.D * x.C;
                return firstMismatch<S>({{F * at1(cd, 2, 2), at1(cd, 1, 2) * F}, {F * at1(dc, 1, 2), at1(dc, 2, 2) * F}});
            });
        }
    }
    // C_(X^-1) = D_X^-1, D_(X^-1) = C_X^-1
    chk.run("CDinv[X=R]", "C_(R^-1) = D_R^-1, D_(R^-1) = C_R^-1", [&]() -> std::optional<nlohmann::json> {
        Op psi = skewInverse(R.Rinv);
        auto cd = cdMatrices(R.Rinv, psi);
        return firstMismatch<S>({{cd.C, R.Dinv}, {cd.D, R.Cinv}});
    });
    chk.run("CDinv[X=F]", "C_(F^-1) = D_F^-1, D_(F^-1) = C_F^-1", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{pr.CFi, pr.DFinv}, {pr.DFi, pr.CFinv}});
    });
}

template <class S>
GPair<S> operatorG(const CompatiblePair<S>& p) {
    auto K2 = embedAt(p.R.K, 2, 3);
    auto Fi1 = embedAt(p.Finv, 1, 3), Fi2 = embedAt(p.Finv, 2, 3);
    auto F1 = embedAt(p.F, 1, 3), F2 = embedAt(p.F, 2, 3);
    return {partialTrace(K2 * Fi1 * Fi2, {2, 3}), partialTrace(F2 * F1 * K2, {2, 3})};
}

template <class S>
void verifyOperatorG(const CompatiblePair<S>& p, Checker& chk) {
    using Op = TensorOperator<S>;
    const int N = p.R.N;
    auto [G, Gi] = operatorG(p);
    const auto& R = p.R;
    const S mu = R.params.mu;
    auto I1 = Op::identity(N, 1);
    chk.run("g-inverse", "G G^-1 = G^-1 G = I", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{G * Gi, I1}, {Gi * G, I1}});
    });
    auto GG = at1(G, 1, 2) * at1(G, 2, 2);
    chk.equal("R-G", "R G1 G2 = G1 G2 R", R.R * GG, GG * R.R);
    chk.run("F-G", "F^e G1 = G2 F^e for e = +1, -1", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{p.F * at1(G, 1, 2), at1(G, 2, 2) * p.F}, {p.Finv * at1(G, 1, 2), at1(G, 2, 2) * p.Finv}});
    });
    chk.equal("comm-Ga", "[D_R, G] = 0", R.D * G, G * R.D);
    chk.run("comm-Gb", "[C_F, G] = [D_F, G] = 0", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{p.CF * G, G * p.CF}, {p.DF * G, G * p.DF}});
    });
    chk.equal("comm-EG", "[E, G] = 0", R.E * G, G * R.E);
    chk.run("comm-E-CF-DF", "[C_F, E] = [D_F, E] = 0", [&]() -> std::optional<nlohmann::json> {
        return firstMismatch<S>({{p.CF * R.E, R.E * p.CF}, {p.DF * R.E, R.E * p.DF}});
    });
    chk.equal("g-rtrace-form", "G_1 = mu^-2 Tr_R(23) K_2 F_1^-1 F_2^-1",
              mu.inverse() * mu.inverse() * weightedTrace(embedAt(R.K, 2, 3) * embedAt(p.Finv, 1, 3) * embedAt(p.Finv, 2, 3), {2, 3}, R.D), G);
    chk.equal("g-remark", "G_1 = C_F_1 Tr_2 F^-1_1 K_1", p.CF * partialTrace(p.Finv * R.K, {2}), G);
    chk.equal("ginv-remark", "G_1^-1 = Tr_2(K_1 F_1) D_F^-1", partialTrace(R.K * p.F, {2}) * p.DFinv, Gi);
    if (p.F == Op::permutation(N))
        chk.equal("g-equals-e", "F = P gives G = E", G, R.E);
}

// ---------------------------------------------------------------- linear maps

template <class S>
MatrixLinearMap<S> MatrixLinearMap<S>::identity(int n) {
    MatrixLinearMap f(n);
    f.coeff_ = Mat<S>::Identity(n * n, n * n);
    return f;
}

template <class S>
MatrixLinearMap<S> MatrixLinearMap<S>::fromAction(int n, const std::function<TensorOperator<S>(const TensorOperator<S>&)>& f) {
    MatrixLinearMap out(n);
    for (int d = 0; d < n; ++d)
        for (int c = 0; c < n; ++c) {
            auto img = f(TensorOperator<S>::matrixUnit(n, d, c));
            if (img.legs() != 1 || img.dimV() != n) throw std::logic_error("map must send matrices to matrices");
            for (int a = 0; a < n; ++a)
                for (const auto& e : img.row(a)) out.coeff_(a * n + static_cast<int>(e.col), d * n + c) = e.value;
        }
    return out;
}

template <class S>
MatrixLinearMap<S> MatrixLinearMap<S>::sandwich(const TensorOperator<S>& a, const TensorOperator<S>& b) {
    return fromAction(a.dimV(), [&](const TensorOperator<S>& m) { return a * m * b; });
}

template <class S>
TensorOperator<S> MatrixLinearMap<S>::apply(const TensorOperator<S>& m) const {
    Vec<S> v(n_ * n_);
    for (int d = 0; d < n_; ++d)
        for (int c = 0; c < n_; ++c) v(d * n_ + c) = m.at(d, c);
    Vec<S> w = coeff_ * v;
    Mat<S> out(n_, n_);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) out(a, b) = w(a * n_ + b);
    return TensorOperator<S>::fromDense(n_, 1, out);
}

template <class S>
std::optional<MatrixLinearMap<S>> MatrixLinearMap<S>::inverse() const {
    auto inv = inverseOf(coeff_);
    if (!inv) return std::nullopt;
    MatrixLinearMap out(n_);
    out.coeff_ = *inv;
    return out;
}

template <class S>
nlohmann::json mapDiff(const MatrixLinearMap<S>& f, const MatrixLinearMap<S>& g, int maxEntries) {
    nlohmann::json out = nlohmann::json::array();
    const int n = f.dimV();
    for (int r = 0; r < n * n; ++r)
        for (int c = 0; c < n * n; ++c) {
            if (static_cast<int>(out.size()) >= maxEntries) return out;
            if (f.coeff()(r, c) != g.coeff()(r, c))
                out.push_back({{"row", {r / n + 1, r % n + 1}}, {"col", {c / n + 1, c % n + 1}}, {"lhs", f.coeff()(r, c).str()}, {"rhs", g.coeff()(r, c).str()}});
        }
    return out;
}

namespace {

// M -> Tr_W(2) A_12 M_1 B_12
template <class S>
MatrixLinearMap<S> traceMap(const TensorOperator<S>& a, const TensorOperator<S>& b, const TensorOperator<S>& weight) {
    return MatrixLinearMap<S>::fromAction(a.dimV(), [&](const TensorOperator<S>& m) { return weightedTrace(a * at1(m, 1, 2) * b, {2}, weight); });
}

}  // namespace

template <class S>
MatrixLinearMap<S> mapPhi(const CompatiblePair<S>& p) {
    return traceMap(p.F, p.Finv * p.R.R, p.R.D);
}

template <class S>
MatrixLinearMap<S> mapXi(const CompatiblePair<S>& p) {
    return traceMap(p.F, p.Finv * p.R.K, p.R.D);
}

template <class S>
MatrixLinearMap<S> mapTheta(const CompatiblePair<S>& p) {
    const S m2 = (p.R.params.mu * p.R.params.mu).inverse();
    return m2 * traceMap(p.R.K * p.F, p.Finv, p.R.D);
}

template <class S>
MatrixLinearMap<S> mapPhiInv(const CompatiblePair<S>& p) {
    const S m2 = (p.R.params.mu * p.R.params.mu).inverse();
    return m2 * traceMap(p.Finv, p.R.Rinv * p.F, p.Rf.D);
}

template <class S>
MatrixLinearMap<S> mapXiInv(const CompatiblePair<S>& p) {
    const S m2 = (p.R.params.mu * p.R.params.mu).inverse();
    return m2 * traceMap(p.Finv, p.R.K * p.F, p.Rf.D);
}

template <class S>
MatrixLinearMap<S> mapThetaInv(const CompatiblePair<S>& p) {
    return traceMap(p.Finv * p.R.K, p.F, p.Rf.D);
}

template <class S>
void verifyMaps(const CompatiblePair<S>& p, std::uint64_t seed, Checker& chk) {
    using Op = TensorOperator<S>;
    using Map = MatrixLinearMap<S>;
    const int N = p.R.N;
    const S mu = p.R.params.mu;
    auto I1 = Op::identity(N, 1);
    Map phi = mapPhi(p), xi = mapXi(p), th = mapTheta(p);
    Map phiI = mapPhiInv(p), xiI = mapXiInv(p), thI = mapThetaInv(p);
    Map id = Map::identity(N);
    auto mapsEqual = [](const std::vector<std::pair<Map, Map>>& pairs) -> std::optional<nlohmann::json> {
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (pairs[k].first != pairs[k].second) return nlohmann::json{{"equation", k + 1}, {"entries", mapDiff(pairs[k].first, pairs[k].second)}};
        return std::nullopt;
    };

    chk.equal("phi-identity", "phi(I) = Tr_R(2) R = I", phi.apply(I1), I1);
    chk.equal("xi-identity", "xi(I) = Tr_R(2) K = mu I", xi.apply(I1), mu * I1);
    chk.run("phi-inverse", "phi^-1 phi = phi phi^-1 = id on all matrix units", [&] { return mapsEqual({{phiI * phi, id}, {phi * phiI, id}}); });
    chk.run("xi-inverse", "xi^-1 xi = xi xi^-1 = id on all matrix units", [&] { return mapsEqual({{xiI * xi, id}, {xi * xiI, id}}); });
    chk.run("theta-inverse", "theta^-1 theta = theta theta^-1 = id on all matrix units", [&] { return mapsEqual({{thI * th, id}, {th * thI, id}}); });
    {
        auto [G, Gi] = operatorG(p);
        Map ad = Map::sandwich(Gi, G);
        // tr_23 K_2 K_1 M_3bar with M_3bar = F_2 F_1 M_1 F_1^-1 F_2^-1
        auto K1 = embedAt(p.R.K, 1, 3), K2 = embedAt(p.R.K, 2, 3);
        auto F1 = embedAt(p.F, 1, 3), F2 = embedAt(p.F, 2, 3), Fi1 = embedAt(p.Finv, 1, 3), Fi2 = embedAt(p.Finv, 2, 3);
        Map chain = Map::fromAction(N, [&](const Op& m) { return partialTrace(K2 * K1 * F2 * F1 * at1(m, 1, 3) * Fi1 * Fi2, {2, 3}); });
        Map chainR = (mu * mu).inverse() * Map::fromAction(N, [&](const Op& m) {
                         return weightedTrace(K2 * K1 * F2 * F1 * at1(m, 1, 3) * Fi1 * Fi2, {2, 3}, p.R.D);
                     });
        chk.run("composition", "xi theta = theta xi = mu^-2 Tr_R(23) K2 K1 M_3bar = tr_23 K2 K1 M_3bar = G^-1 M G", [&] {
            return mapsEqual({{xi * th, ad}, {th * xi, ad}, {chainR, ad}, {chain, ad}});
        });
    }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 5; ++t) {
        Op M = randomMatrix<S>(N, rng);
        const std::string tg = "[t=" + std::to_string(t) + "]";
        chk.run("phi-xi-traces" + tg, "Tr_Rf phi(M) = Tr_R M, Tr_Rf xi(M) = mu Tr_R M", [&]() -> std::optional<nlohmann::json> {
            S trR = weightedTrace(M, {1}, p.R.D).scalarValue();
            S a = weightedTrace(phi.apply(M), {1}, p.Rf.D).scalarValue();
            S b = weightedTrace(xi.apply(M), {1}, p.Rf.D).scalarValue();
            if (a == trR && b == mu * trR) return std::nullopt;
            return nlohmann::json{{"TrR", trR.str()}, {"TrRf_phi", a.str()}, {"TrRf_xi", b.str()}};
        });
    }
    chk.run("phi-inverse-weakened", "phi^-1 with D_(Rf^-1) in place of mu^-2 D_Rf agrees", [&]() -> std::optional<nlohmann::json> {
        Op psi = skewInverse(p.Rf.Rinv);
        Op w = cdMatrices(p.Rf.Rinv, psi).D;
        Map alt = traceMap(p.Finv, p.R.Rinv * p.F, w);
        return mapsEqual({{alt, phiI}, {alt * phi, id}});
    });
}

#define QMBMW_INSTANTIATE(S)                                                                           \
    template TensorOperator<S> randomMatrix(int, std::mt19937_64&);                                    \
    template std::optional<nlohmann::json> twistRelationsWitness(const TensorOperator<S>&, const TensorOperator<S>&); \
    template CompatiblePair<S> makePair(const BmwRMatrix<S>&, const TensorOperator<S>&, std::string);  \
    template BmwRMatrix<S> twist(const CompatiblePair<S>&);                                            \
    template void verifyTwistCalculus(const CompatiblePair<S>&, std::uint64_t, Checker&);              \
    template GPair<S> operatorG(const CompatiblePair<S>&);                                             \
    template void verifyOperatorG(const CompatiblePair<S>&, Checker&);                                 \
    template class MatrixLinearMap<S>;                                                                 \
    template nlohmann::json mapDiff(const MatrixLinearMap<S>&, const MatrixLinearMap<S>&, int);        \
    template MatrixLinearMap<S> mapPhi(const CompatiblePair<S>&);                                      \
    template MatrixLinearMap<S> mapXi(const CompatiblePair<S>&);                                       \
    template MatrixLinearMap<S> mapTheta(const CompatiblePair<S>&);                                    \
    template MatrixLinearMap<S> mapPhiInv(const CompatiblePair<S>&);                                   \
    template MatrixLinearMap<S> mapXiInv(const CompatiblePair<S>&);                                    \
    template MatrixLinearMap<S> mapThetaInv(const CompatiblePair<S>&);                                 \
    template void verifyMaps(const CompatiblePair<S>&, std::uint64_t, Checker&);

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
