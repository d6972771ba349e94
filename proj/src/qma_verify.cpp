#include "qmbmw/qma.hpp"

#include <functional>

namespace qmbmw {

namespace {

template <class S>
using T = QmaTensor<S>;

// operands are built inside the check so degree overflows and poles are recorded
template <class L, class R>
bool eqLazy(Checker& chk, const std::string& name, const std::string& ref, L&& lhs, R&& rhs) {
    return chk.run(name, ref, [&]() -> std::optional<nlohmann::json> {
        auto a = lhs();
        auto b = rhs();
        if (a == b) return std::nullopt;
        return nlohmann::json{{"diff", tensorDiff(a, b)}};
    });
}

std::string tag(const std::string& name, std::initializer_list<std::pair<const char*, int>> kv) {
    std::string s = name + "[";
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) s += ",";
        s += std::string(k) + "=" + std::to_string(v);
        first = false;
    }
    return s + "]";
}

std::string overflowReason(int needed, int maxDegree) {
    return "needs degree " + std::to_string(needed) + ", maxDegree is " + std::to_string(maxDegree);
}

template <class S>
std::string inadmissibleReason(const QuantumMatrixAlgebra<S>& qa, int n, Side side) {
    return "inadmissible parameters: " + checkAdmissible(qa.params(), n, side).reason;
}

template <class V>
bool allZero(const V& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (!v(k).isZero()) return false;
    return true;
}

BmwWord descending(int from, int to) {
    BmwWord w;
    for (int k = from; k >= to; --k) w.push_back(sigma(k));
    return w;
}

}  // namespace

// ---------------------------------------------------------------- oracles

template <class S>
int degreeTwoRankOracle(const CompatiblePair<S>& pair) {
    const int N = pair.R.N;
    const int D = N * N;
    const Mat<S> r = pair.R.R.toDense(), rf = pair.Rf.R.toDense();
    // Z -> R Z - Z R_f on D x D matrices, Z(i,j) at column i*D+j
    Mat<S> L = Mat<S>::Zero(D * D, D * D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) {
                if (!r(i, k).isZero()) L(i * D + j, k * D + j) += r(i, k);
                if (!rf(k, j).isZero()) L(i * D + j, i * D + k) -= rf(k, j);
            }
    return D * D - rankOf(L);
}

template <class S>
int degreeTwoSpectralOracle(const Representation<S>& rep) {
    const int ra = rankOf(rep.antisymmetrizer(2, 2).toDense());
    const int rs = rankOf(rep.symmetrizer(2, 2).toDense());
    return ra * ra + rs * rs + 1;
}

// ---------------------------------------------------------------- reducer

template <class S>
void verifyReducer(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& red = qa.reducer();
    const int N = qa.dimV(), G = N * N;
    const auto dims = red.dims();
    chk.expect("graded-dims", "dim M_0 = 1, dim M_1 = N^2", dims[0] == 1 && dims[1] == G, {{"dims", dims}});
    if (red.maxDegree() < 2) {
        chk.skip("degree2-rank-oracle", "dim M_2 = N^4 - rank(Z -> R Z - Z R_f)", overflowReason(2, red.maxDegree()));
        chk.skip("degree2-spectral-oracle", "dim M_2 = r_a^2 + r_s^2 + 1", overflowReason(2, red.maxDegree()));
        return;
    }
    const int rank = degreeTwoRankOracle(qa.pair());
    chk.expect("degree2-rank-oracle", "dim M_2 = N^4 - rank(Z -> R Z - Z R_f)", dims[2] == rank, {{"dim", dims[2]}, {"oracle", rank}});
    chk.expect("relation-rank", "rank of the relations + dim M_2 = N^4", red.relationRank() + dims[2] == G * G,
               {{"rank", red.relationRank()}, {"dim", dims[2]}});
    const int spec = degreeTwoSpectralOracle(qa.rep());
    chk.expect("degree2-spectral-oracle", "dim M_2 = r_a^2 + r_s^2 + 1", dims[2] == spec, {{"dim", dims[2]}, {"oracle", spec}});

    chk.run("reduce-idempotent", "normal form of a standard monomial is itself", [&]() -> std::optional<nlohmann::json> {
        for (int n = 0; n <= red.maxDegree(); ++n) {
            const auto& nf = red.normalForms(n);
            const auto& sm = red.standardMonomials(n);
            for (Eigen::Index k = 0; k < nf.rows(); ++k)
                for (std::size_t j = 0; j < sm.size(); ++j)
                    if (nf(k, static_cast<Eigen::Index>(sm[j])) != S(static_cast<Eigen::Index>(j) == k ? 1 : 0))
                        return nlohmann::json{{"degree", n}, {"row", k}, {"monomial", sm[j]}};
        }
        return std::nullopt;
    });

    chk.run("relation-annihilated", "every relation reduces to zero", [&]() -> std::optional<nlohmann::json> {
        const auto& rel = red.relationEntries();
        for (Eigen::Index r = 0; r < rel.rows(); ++r)
            if (!allZero(red.reduceVector(2, rel.row(r).transpose()))) return nlohmann::json{{"relation", r}};
        return std::nullopt;
    });

    if (red.maxDegree() < 3) {
        chk.skip("ideal-two-sided", "x.rel and rel.x reduce to zero", overflowReason(3, red.maxDegree()));
        chk.skip("associativity", "(M M) M = M (M M)", overflowReason(3, red.maxDegree()));
        return;
    }
    chk.run("ideal-two-sided", "x.rel and rel.x reduce to zero", [&]() -> std::optional<nlohmann::json> {
        const auto& rel = red.relationEntries();
        const Eigen::Index W = G * G;
        for (Eigen::Index r = 0; r < rel.rows(); ++r) {
            if (allZero(rel.row(r))) continue;
            for (int x = 0; x < G; ++x) {
                Vec<S> left = Vec<S>::Zero(W * G), right = Vec<S>::Zero(W * G);
                for (Eigen::Index m = 0; m < W; ++m) {
                    if (rel(r, m).isZero()) continue;
                    left(x * W + m) = rel(r, m);
                    right(m * G + x) = rel(r, m);
                }
                if (!allZero(red.reduceVector(3, left))) return nlohmann::json{{"relation", r}, {"generator", x}, {"side", "left"}};
                if (!allZero(red.reduceVector(3, right))) return nlohmann::json{{"relation", r}, {"generator", x}, {"side", "right"}};
            }
        }
        return std::nullopt;
    });
    eqLazy(chk, "associativity", "(M M) M = M (M M)",
           [&] { return red.multiply(red.multiply(qa.M(), qa.M()), qa.M()); },
           [&] { return red.multiply(qa.M(), red.multiply(qa.M(), qa.M())); });
}

// ---------------------------------------------------------------- copies

template <class S>
void verifyCopies(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& red = qa.reducer();
    const auto& pair = qa.pair();
    const int legs = std::min(3, red.maxDegree());
    for (int j = 1; j + 1 <= legs; ++j)
        eqLazy(chk, tag("rmm-k", {{"j", j}}), "R_j M_jbar M_(j+1)bar = M_jbar M_(j+1)bar R_j",
               [&] { return red.times(embedAt(pair.R.R, j, legs), red.copiesProduct(j, j + 1, legs)); },
               [&] { return red.times(red.copiesProduct(j, j + 1, legs), embedAt(pair.R.R, j, legs)); });
    for (int i = 1; i + 1 <= legs; ++i)
        for (int j = 1; j <= legs; ++j) {
            if (j == i || j == i + 1) continue;
            eqLazy(chk, tag("fm-k", {{"i", i}, {"j", j}}), "F_i M_jbar = M_jbar F_i for j != i, i+1",
                   [&] { return red.times(embedAt(pair.F, i, legs), red.copy(j, legs)); },
                   [&] { return red.times(red.copy(j, legs), embedAt(pair.F, i, legs)); });
            eqLazy(chk, tag("rm-k", {{"i", i}, {"j", j}}), "R_i M_jbar = M_jbar R_i for j != i, i+1",
                   [&] { return red.times(embedAt(pair.R.R, i, legs), red.copy(j, legs)); },
                   [&] { return red.times(red.copy(j, legs), embedAt(pair.R.R, i, legs)); });
        }
    for (int i = 1; i + 1 <= legs; ++i)
        for (int k = i; k + 1 <= legs; ++k) {
            auto fs = TensorOperator<S>::identity(qa.dimV(), legs);
            for (int l = i; l <= k; ++l) fs = fs * embedAt(pair.F, l, legs);
            eqLazy(chk, tag("stringshift", {{"i", i}, {"k", k}}), "F_i..F_k M_ibar..M_kbar = M_(i+1)bar..M_(k+1)bar F_i..F_k",
                   [&] { return red.times(fs, red.copiesProduct(i, k, legs)); },
                   [&] { return red.times(red.copiesProduct(i + 1, k + 1, legs), fs); });
        }
    for (int n = 2; n <= legs; ++n)
        eqLazy(chk, tag("copies-product", {{"n", n}}), "M_1bar ... M_nbar built by embedding = built left to right",
               [&] { return red.copiesProduct(1, n, n); },
               [&] {
                   auto out = red.copy(1, n);
                   for (int k = 2; k <= n; ++k) out = red.multiply(out, red.copy(k, n));
                   return out;
               });
}

// ---------------------------------------------------------------- characteristic subalgebra

template <class S>
void verifyCharacteristic(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& pr = qa.params();
    const auto& rep = qa.rep();
    const auto& red = qa.reducer();
    const int maxDeg = qa.maxDegree();
    const S mu = pr.mu, eta = pr.eta, q = pr.q;
    eqLazy(chk, "p0", "Tr_R I = mu eta", [&] { return qa.p(0); }, [&] { return qa.element(mu * eta); });
    eqLazy(chk, "char1", "a_1 = s_1 = p_1", [&] { return qa.a(1) - qa.p(1); }, [&] { return qa.s(1) - qa.p(1); });
    if (maxDeg < 2) return;
    eqLazy(chk, "g-definition", "g = ch(c^(2))", [&] { return qa.g(); }, [&] { return qa.ch(rep.contractor(2, 2)); });
    eqLazy(chk, "multip-rule", "ch(1) ch(1) = ch(1 on two legs)", [&] { return qa.mul(qa.p(1), qa.p(1)); },
           [&] { return qa.ch(TensorOperator<S>::identity(qa.dimV(), 2)); });
    eqLazy(chk, "skein", "ch(s_1) - ch(s_1^-1) = (q - 1/q)(p_1^2 - eta g)",
           [&] { return qa.ch(BmwWord{sigma(1)}, 2) - qa.ch(BmwWord{sigmaInv(1)}, 2); },
           [&] { return (q - q.inverse()) * (qa.mul(qa.p(1), qa.p(1)) - eta * qa.g()); });
    eqLazy(chk, "resolution", "a_2 + s_2 + g = Tr_R(12) M_1bar M_2bar", [&] { return qa.a(2) + qa.s(2) + qa.g(); },
           [&] { return qa.ch(TensorOperator<S>::identity(qa.dimV(), 2)); });
    for (int n = 1; n + 1 <= maxDeg; ++n) {
        const auto K = embedAt(qa.pair().R.K, n, n + 1);
        eqLazy(chk, tag("tau2", {{"n", n}}), "K_n M_nbar M_(n+1)bar = mu^-2 K_n g",
               [&] { return red.times(K, red.copiesProduct(n, n + 1, n + 1)); },
               [&] { return (mu * mu).inverse() * red.times(K, red.identityTimes(qa.g(), n + 1)); });
    }
    if (maxDeg < 3) {
        chk.skip("cyclic", "ch(a b) = ch(b a)", overflowReason(3, maxDeg));
        return;
    }
    eqLazy(chk, tag("cyclic", {{"w", 1}}), "ch(s_1 s_2) = ch(s_2 s_1)", [&] { return qa.ch(BmwWord{sigma(1), sigma(2)}, 3); },
           [&] { return qa.ch(BmwWord{sigma(2), sigma(1)}, 3); });
    eqLazy(chk, tag("cyclic", {{"w", 2}}), "ch(k_1 s_2) = ch(s_2 k_1)", [&] { return qa.ch(BmwWord{kappa(1), sigma(2)}, 3); },
           [&] { return qa.ch(BmwWord{sigma(2), kappa(1)}, 3); });
    eqLazy(chk, tag("cyclic", {{"w", 3}}), "ch(s_1^-1 k_2 s_1) = ch(k_2)",
           [&] { return qa.ch(BmwWord{sigmaInv(1), kappa(2), sigma(1)}, 3); }, [&] { return qa.ch(BmwWord{kappa(2)}, 3); });
    eqLazy(chk, "multip-rule-3", "p_1 p_2 = ch(s_2) on three legs", [&] { return qa.mul(qa.p(1), qa.p(2)); },
           [&] { return qa.ch(BmwWord{sigma(2)}, 3); });
    // every pair from {g, p_1, p_2, a_2} that fits
    const std::vector<std::pair<std::string, std::function<T<S>()>>> gens{
        {"g", [&] { return qa.g(); }}, {"p1", [&] { return qa.p(1); }}, {"p2", [&] { return qa.p(2); }}, {"a2", [&] { return qa.a(2); }}};
    const std::vector<int> deg{2, 1, 2, 2};
    for (std::size_t x = 0; x < gens.size(); ++x)
        for (std::size_t y = x + 1; y < gens.size(); ++y) {
            const std::string name = "commutativity[" + gens[x].first + "," + gens[y].first + "]";
            if (deg[x] + deg[y] > maxDeg) {
                chk.skip(name, "x y = y x", overflowReason(deg[x] + deg[y], maxDeg));
                continue;
            }
            eqLazy(chk, name, "x y = y x", [&] { return qa.mul(gens[x].second(), gens[y].second()); },
                   [&] { return qa.mul(gens[y].second(), gens[x].second()); });
        }
}

// ---------------------------------------------------------------- descendants

template <class S>
void verifyDescendants(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& rep = qa.rep();
    const auto& red = qa.reducer();
    const int maxDeg = qa.maxDegree();
    const int N = qa.dimV();
    eqLazy(chk, "descendant-identity", "M^(1) = M", [&] { return qa.descendant(TensorOperator<S>::identity(N, 1)); },
           [&] { return qa.M(); });
    std::vector<std::pair<std::string, BmwWord>> words{{"s1", {sigma(1)}}, {"k1", {kappa(1)}}, {"si1", {sigmaInv(1)}}};
    if (maxDeg >= 3) {
        words.push_back({"s1s2", {sigma(1), sigma(2)}});
        words.push_back({"k2s1", {kappa(2), sigma(1)}});
    }
    for (const auto& [label, w] : words) {
        const int n = maxLeg(w) + 1;
        if (n > maxDeg) continue;
        eqLazy(chk, "rtrace-map[" + label + "]", "Tr_R M^(x) = ch(x)", [&] { return qa.trR(qa.descendant(w, n)); },
               [&] { return qa.ch(w, n); });
    }
    if (maxDeg < 2) return;
    eqLazy(chk, "descendant-power", "M^(s_1) = M^2bar", [&] { return qa.descendant(BmwWord{sigma(1)}, 2); },
           [&] { return qa.power(2); });
    eqLazy(chk, "r-module", "M^(x) ch(y) = M^(x y^n)", [&] { return qa.rightTimes(qa.M(), qa.p(1)); },
           [&] { return qa.descendant(TensorOperator<S>::identity(N, 2)); });
    if (maxDeg < 3) {
        chk.skip("reduced-cyclic", "M^(x y^1) = M^(y^1 x)", overflowReason(3, maxDeg));
        chk.skip("reversal", "M^(w) = M^(reverse w)", overflowReason(3, maxDeg));
        return;
    }
    eqLazy(chk, "r-module-3", "M^(s_1) ch(1) = M^(s_1) on three legs", [&] { return qa.rightTimes(qa.power(2), qa.p(1)); },
           [&] { return qa.descendant(BmwWord{sigma(1)}, 3); });
    // y supported on legs 2..n
    eqLazy(chk, tag("reduced-cyclic", {{"w", 1}}), "M^(s_1 s_2) = M^(s_2 s_1)",
           [&] { return qa.descendant(BmwWord{sigma(1), sigma(2)}, 3); }, [&] { return qa.descendant(BmwWord{sigma(2), sigma(1)}, 3); });
    eqLazy(chk, tag("reduced-cyclic", {{"w", 2}}), "M^(s_1 k_2) = M^(k_2 s_1)",
           [&] { return qa.descendant(BmwWord{sigma(1), kappa(2)}, 3); }, [&] { return qa.descendant(BmwWord{kappa(2), sigma(1)}, 3); });
    for (const auto& [label, w] : std::vector<std::pair<std::string, BmwWord>>{{"k1s2", {kappa(1), sigma(2)}}, {"s1s2", {sigma(1), sigma(2)}}})
        eqLazy(chk, "reversal[" + label + "]", "M^(w) = M^(reverse w)", [&] { return qa.descendant(w, 3); },
               [&] { return qa.descendant(reverse(w), 3); });
    eqLazy(chk, "descendant-linearity", "M^(a^(3)) from the idempotent = sum over its words",
           [&] { return qa.descendant(rep.antisymmetrizer(3, 3)); },
           [&] {
               auto comb = antisymmetrizerWord<S>(3, qa.params());
               auto out = red.zero(1, 3);
               for (const auto& [w, c] : comb.terms()) out += c * qa.descendant(w, 3);
               return out;
           });
}

// ---------------------------------------------------------------- star products

namespace {

// exponent of M^(a) * M^(b), a on n legs, b on m legs: a b^n s_n..s_1 s_2^-1..s_n^-1
BmwWord starWord(const BmwWord& a, int n, const BmwWord& b) {
    BmwWord w = a;
    for (auto l : shiftUp(b, n)) w.push_back(l);
    for (int k = n; k >= 1; --k) w.push_back(sigma(k));
    for (int k = 2; k <= n; ++k) w.push_back(sigmaInv(k));
    return w;
}

// the same product as s_m^-1..s_2^-1 s_1 s_2..s_m a^m b
BmwWord starWordAlt(const BmwWord& a, const BmwWord& b, int m) {
    BmwWord w;
    for (int k = m; k >= 2; --k) w.push_back(sigmaInv(k));
    w.push_back(sigma(1));
    for (int k = 2; k <= m; ++k) w.push_back(sigma(k));
    for (auto l : shiftUp(a, m)) w.push_back(l);
    for (auto l : b) w.push_back(l);
    return w;
}

}  // namespace

template <class S>
void verifyStarIdentities(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& red = qa.reducer();
    const int maxDeg = qa.maxDegree();
    const S mu = qa.params().mu;
    auto mphi = [&](const T<S>& x) { return qa.mul(qa.M(), red.apply(qa.phi(), x)); };
    eqLazy(chk, "star-identity", "M * I = M phi(I) = M", [&] { return mphi(qa.I()); }, [&] { return qa.M(); });
    if (maxDeg < 2) return;
    eqLazy(chk, "star-powers", "M * M = M^2bar", [&] { return qa.descendant(starWord({}, 1, {}), 2); }, [&] { return qa.power(2); });
    const std::vector<std::pair<std::string, BmwWord>> betas{{"1", {}}, {"s1", {sigma(1)}}};
    for (const auto& [label, beta] : betas) {
        const int m = maxLeg(beta) + 1;
        const std::string name = "star-M-phi[" + label + "]", alt = "star-M-phi-alt[" + label + "]";
        if (m + 1 > maxDeg) {
            chk.skip(name, "M * M^(b) = M phi(M^(b))", overflowReason(m + 1, maxDeg));
            chk.skip(alt, "M * M^(b) = M phi(M^(b))", overflowReason(m + 1, maxDeg));
            continue;
        }
        eqLazy(chk, name, "M * M^(b) = M phi(M^(b))", [&] { return qa.descendant(starWord({}, 1, beta), m + 1); },
               [&] { return mphi(qa.descendant(beta, m)); });
        eqLazy(chk, alt, "M * M^(b) = M phi(M^(b))", [&] { return qa.descendant(starWordAlt({}, beta, m), m + 1); },
               [&] { return mphi(qa.descendant(beta, m)); });
    }
    if (maxDeg < 3) {
        for (const char* n : {"star-associativity", "star-centrality", "star-module"}) chk.skip(n, "", overflowReason(3, maxDeg));
        return;
    }
    const BmwWord mm = starWord({}, 1, {});
    eqLazy(chk, "star-associativity", "(M * M) * M = M * (M * M)", [&] { return qa.descendant(starWord(mm, 2, {}), 3); },
           [&] { return qa.descendant(starWordAlt({}, mm, 2), 3); });
    eqLazy(chk, "star-power3", "M * (M * M) = M^3bar", [&] { return mphi(qa.power(2)); }, [&] { return qa.power(3); });
    eqLazy(chk, "star-centrality", "M * M^(k_1) = M^(k_1) * M", [&] { return qa.descendant(starWord({}, 1, {kappa(1)}), 3); },
           [&] { return qa.descendant(starWord({kappa(1)}, 2, {}), 3); });
    // I g = mu M^(k_1)
    eqLazy(chk, "star-module", "(I g) * M = M g", [&] { return mu * qa.descendant(starWord({kappa(1)}, 2, {}), 3); },
           [&] { return qa.rightTimes(qa.M(), qa.g()); });
    const BmwWord mt2{sigma(2), kappa(1)};  // exponent of Mt(M^2bar)
    if (maxDeg < 4) {
        chk.skip("star-commutativity", "Mt(M^2bar) * M = M * Mt(M^2bar)", overflowReason(4, maxDeg));
        return;
    }
    eqLazy(chk, "star-commutativity", "Mt(M^2bar) * M = M * Mt(M^2bar)", [&] { return qa.descendant(starWord(mt2, 3, {}), 4); },
           [&] { return mphi(qa.mt(qa.power(2))); });
}

// ---------------------------------------------------------------- M . xi(N)

template <class S>
void verifyMt(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const int maxDeg = qa.maxDegree();
    const S mu = qa.params().mu;
    eqLazy(chk, "mt-identity", "Mt(I) = mu M", [&] { return qa.mt(qa.I()); }, [&] { return mu * qa.M(); });
    if (maxDeg < 2) return;
    eqLazy(chk, "mt-M", "Mt(M) = I g / mu", [&] { return qa.mt(qa.M()); }, [&] { return mu.inverse() * qa.identityTimes(qa.g()); });
    eqLazy(chk, "mt-word[1]", "Mt(M^(a)) = M^(a^1 k_1)", [&] { return qa.mt(qa.M()); }, [&] { return qa.descendant(BmwWord{kappa(1)}, 2); });
    if (maxDeg < 3) {
        chk.skip("mt-word[s1]", "Mt(M^(a)) = M^(a^1 k_1)", overflowReason(3, maxDeg));
        return;
    }
    eqLazy(chk, "mt-word[s1]", "Mt(M^(a)) = M^(a^1 k_1)", [&] { return qa.mt(qa.power(2)); },
           [&] { return qa.descendant(BmwWord{sigma(2), kappa(1)}, 3); });
    if (maxDeg < 4) {
        chk.skip("mt-twice", "Mt(Mt(M^2bar)) = M^2bar g", overflowReason(4, maxDeg));
        return;
    }
    eqLazy(chk, "mt-twice", "Mt(Mt(M^2bar)) = M^2bar g", [&] { return qa.mt(qa.mt(qa.power(2))); },
           [&] { return qa.rightTimes(qa.power(2), qa.g()); });
}

// ---------------------------------------------------------------- recursion for A and B

template <class S>
void verifyLemma51(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& pr = qa.params();
    const auto& rep = qa.rep();
    const auto& red = qa.reducer();
    const S q = pr.q, mu = pr.mu;
    const int maxDeg = qa.maxDegree();
    const std::string ref1 = "A(m-1,i+1) = q^i M^m a_i - A(m,i) - c_i B(m,i)";
    const std::string ref2 = "B(m+1,i+1) = (q^-i/mu M^m a_i + (q-1/q)/(1+mu q^(2i-1)) A(m,i) - B(m,i)) g";
    auto c = [&](int i) { return mu * power(q, 2 * i - 1) * (q - q.inverse()) / (S(1) + mu * power(q, 2 * i - 1)); };
    auto d = [&](int i) { return (q - q.inverse()) / (S(1) + mu * power(q, 2 * i - 1)); };
    auto admissible = [&](int i) { return qa.antisymAdmissible(i); };

    // traced closed forms, built from characteristic elements only
    auto trA = [&](int m, int i) -> T<S> {
        if (i == 0) return red.zero(0, m);
        const S iq = qNumber(i, pr);
        if (m == -1) {
            auto t = red.times(red.copiesProduct(2, i, i), rep.antisymmetrizer(i, i));
            std::vector<int> rest;
            for (int l = 2; l <= i; ++l) rest.push_back(l);
            return iq * red.weightedTrace(red.weightedTrace(t, rest, qa.pair().R.D), {1}, qa.pair().Rf.D);
        }
        const int n = m + i;
        return iq * qa.ch(shiftUp(rep.antisymmetrizer(i, i), m, n) * rep.represent(descending(m, 1), n));
    };
    auto trB = [&](int m, int i) -> T<S> {
        if (i == 0) return red.zero(0, m);
        const S iq = qNumber(i, pr);
        if (m == 0) return (mu * iq) * qa.a(i);
        BmwWord tail{kappa(m)};
        for (auto l : descending(m - 1, 1)) tail.push_back(l);
        const int n = m + i;
        return iq * qa.ch(shiftUp(rep.antisymmetrizer(i, i), m, n) * rep.represent(tail, n));
    };

    eqLazy(chk, "boundary-A[0,1]", "A(0,1) = M", [&] { return qa.A(0, 1); }, [&] { return qa.M(); });
    eqLazy(chk, "boundary-A[-1,1]", "A(-1,1) = I", [&] { return qa.A(-1, 1); }, [&] { return qa.I(); });
    if (maxDeg >= 2)
        eqLazy(chk, "boundary-B[1,1]", "B(1,1) = I g / mu", [&] { return qa.B(1, 1); },
               [&] { return mu.inverse() * qa.identityTimes(qa.g()); });
    for (int m = 0; m <= maxDeg; ++m)
        for (int i = 0; m + i <= maxDeg; ++i) {
            if (m == 0 && i == 0) continue;
            const std::string name = tag("rek1", {{"m", m}, {"i", i}});
            const std::string tname = tag("rek1-traced", {{"m", m}, {"i", i}});
            if (!admissible(i + 1)) {
                chk.skip(name, ref1, inadmissibleReason(qa, i + 1, Side::Antisym));
                chk.skip(tname, ref1, inadmissibleReason(qa, i + 1, Side::Antisym));
                continue;
            }
            eqLazy(chk, name, ref1, [&] { return qa.A(m - 1, i + 1); },
                   [&] { return power(q, i) * qa.rightTimes(qa.power(m), qa.a(i)) - qa.A(m, i) - c(i) * qa.B(m, i); });
            eqLazy(chk, tname, "Tr_R of: " + ref1, [&] { return trA(m - 1, i + 1); },
                   [&] { return power(q, i) * qa.mul(qa.p(m), qa.a(i)) - trA(m, i) - c(i) * trB(m, i); });
        }
    for (int m = 0; m <= maxDeg; ++m)
        for (int i = 0; m + i + 2 <= std::max(maxDeg, 4); ++i) {
            const std::string name = tag("rek2", {{"m", m}, {"i", i}});
            const std::string tname = tag("rek2-traced", {{"m", m}, {"i", i}});
            if (m + i + 2 > maxDeg) {
                chk.skip(name, ref2, overflowReason(m + i + 2, maxDeg));
                chk.skip(tname, ref2, overflowReason(m + i + 2, maxDeg));
                continue;
            }
            if (!admissible(i + 1)) {
                chk.skip(name, ref2, inadmissibleReason(qa, i + 1, Side::Antisym));
                chk.skip(tname, ref2, inadmissibleReason(qa, i + 1, Side::Antisym));
                continue;
            }
            eqLazy(chk, name, ref2, [&] { return qa.B(m + 1, i + 1); },
                   [&] {
                       auto inner = (mu.inverse() * power(q, -i)) * qa.rightTimes(qa.power(m), qa.a(i)) + d(i) * qa.A(m, i) - qa.B(m, i);
                       return qa.rightTimes(inner, qa.g());
                   });
            eqLazy(chk, tname, "Tr_R of: " + ref2, [&] { return trB(m + 1, i + 1); },
                   [&] {
                       auto inner = (mu.inverse() * power(q, -i)) * qa.mul(qa.p(m), qa.a(i)) + d(i) * trA(m, i) - trB(m, i);
                       return qa.mul(inner, qa.g());
                   });
        }
    // the closed forms agree with the traced matrices
    for (int i = 1; i <= maxDeg; ++i) {
        if (!admissible(i)) continue;
        eqLazy(chk, tag("trace-A", {{"m", -1}, {"i", i}}), "Tr_R A(-1,i) = i_q Tr_Rf(Y)", [&] { return qa.trR(qa.A(-1, i)); },
               [&] { return trA(-1, i); });
        eqLazy(chk, tag("trace-B", {{"m", 0}, {"i", i}}), "Tr_R B(0,i) = mu i_q a_i", [&] { return qa.trR(qa.B(0, i)); },
               [&] { return trB(0, i); });
    }
}

// ---------------------------------------------------------------- Newton and Wronski

template <class S>
void verifyNewtonWronski(const QuantumMatrixAlgebra<S>& qa, int nMax, Checker& chk) {
    const auto& pr = qa.params();
    const S q = pr.q, mu = pr.mu;
    const int maxDeg = qa.maxDegree();
    auto sign = [](int k) { return k % 2 == 0 ? S(1) : S(-1); };
    const std::string refA = "sum (-q)^i a_i p_(n-i) = (-1)^(n-1) n_q a_n + (-1)^n sum (mu q^(n-2i) - q^(1-n+2i)) a_(n-2i) g^i";
    const std::string refS = "sum q^-i s_i p_(n-i) = n_q s_n + sum (mu q^(2i-n) + q^(n-2i-1)) s_(n-2i) g^i";
    const std::string refW = "sum (-1)^i a_i s_(n-i) = delta_n0 - delta_n2 g";

    // left sides without the top term, shared by the identities and the recursions
    auto newtonA = [&](int n, const std::function<T<S>(int)>& a) {
        auto lhs = qa.reducer().zero(0, n);
        for (int i = 0; i < n; ++i) lhs += power(-q, i) * qa.mul(a(i), qa.p(n - i));
        auto g = qa.reducer().zero(0, n);
        for (int i = 1; 2 * i <= n; ++i) g += (mu * power(q, n - 2 * i) - power(q, 1 - n + 2 * i)) * qa.mul(a(n - 2 * i), qa.gPower(i));
        return std::make_pair(lhs, sign(n) * g);
    };
    auto newtonS = [&](int n, const std::function<T<S>(int)>& s) {
        auto lhs = qa.reducer().zero(0, n);
        for (int i = 0; i < n; ++i) lhs += power(q, -i) * qa.mul(s(i), qa.p(n - i));
        auto g = qa.reducer().zero(0, n);
        for (int i = 1; 2 * i <= n; ++i) g += (mu * power(q, 2 * i - n) + power(q, n - 2 * i - 1)) * qa.mul(s(n - 2 * i), qa.gPower(i));
        return std::make_pair(lhs, g);
    };
    std::function<T<S>(int)> aa = [&](int i) { return qa.a(i); };
    std::function<T<S>(int)> ss = [&](int i) { return qa.s(i); };

    for (int n = 1; n <= nMax; ++n) {
        const std::string na = tag("newton-a", {{"n", n}}), ns = tag("newton-s", {{"n", n}});
        if (n > maxDeg) {
            chk.skip(na, refA, overflowReason(n, maxDeg));
            chk.skip(ns, refS, overflowReason(n, maxDeg));
            continue;
        }
        const S nq = qNumber(n, pr);
        if (qa.antisymAdmissible(n))
            eqLazy(chk, na, refA, [&] { return newtonA(n, aa).first; }, [&] {
                auto [l, g] = newtonA(n, aa);
                return sign(n - 1) * nq * qa.a(n) + g;
            });
        else
            chk.skip(na, refA, inadmissibleReason(qa, n, Side::Antisym));
        if (qa.symAdmissible(n))
            eqLazy(chk, ns, refS, [&] { return newtonS(n, ss).first; }, [&] {
                auto [l, g] = newtonS(n, ss);
                return nq * qa.s(n) + g;
            });
        else
            chk.skip(ns, refS, inadmissibleReason(qa, n, Side::Sym));
    }
    for (int n = 0; n <= nMax; ++n) {
        const std::string name = tag("wronski", {{"n", n}});
        if (n > maxDeg) {
            chk.skip(name, refW, overflowReason(n, maxDeg));
            continue;
        }
        if (!qa.antisymAdmissible(n) || !qa.symAdmissible(n)) {
            chk.skip(name, refW, inadmissibleReason(qa, n, qa.antisymAdmissible(n) ? Side::Sym : Side::Antisym));
            continue;
        }
        eqLazy(chk, name, refW,
               [&] {
                   auto sum = qa.reducer().zero(0, n);
                   for (int i = 0; i <= n; ++i) sum += sign(i) * qa.mul(qa.a(i), qa.s(n - i));
                   return sum;
               },
               [&] {
                   if (n == 0) return qa.element(S(1));
                   if (n == 2) return S(-1) * qa.g();
                   return qa.reducer().zero(0, n);
               });
    }

    // recursions solved for the top term reproduce a_n and s_n
    std::vector<T<S>> ah{qa.element(S(1))}, sh{qa.element(S(1))};
    std::function<T<S>(int)> ahat = [&](int i) { return ah[i]; };
    std::function<T<S>(int)> shat = [&](int i) { return sh[i]; };
    for (int n = 1; n <= std::min(nMax, maxDeg); ++n) {
        const S nq = qNumber(n, pr);
        auto [la, ga] = newtonA(n, ahat);
        ah.push_back(sign(n - 1) * nq.inverse() * (la - ga));
        auto [ls, gs] = newtonS(n, shat);
        sh.push_back(nq.inverse() * (ls - gs));
        if (qa.antisymAdmissible(n))
            eqLazy(chk, tag("remark-a-recursion", {{"n", n}}), "a_n solved from the Newton relations = ch(a^(n))",
                   [&] { return ah[n]; }, [&] { return qa.a(n); });
        if (qa.symAdmissible(n))
            eqLazy(chk, tag("remark-s-recursion", {{"n", n}}), "s_n solved from the Newton relations = ch(s^(n))",
                   [&] { return sh[n]; }, [&] { return qa.s(n); });
    }
    if (maxDeg >= 2) {
        eqLazy(chk, "closed-form-p2", "p_2 - q a_1 p_1 = -2_q a_2 + (mu - q) g",
               [&] { return qa.p(2) - q * qa.mul(qa.a(1), qa.p(1)); },
               [&] { return S(-1) * qNumber(2, pr) * qa.a(2) + (mu - q) * qa.g(); });
        eqLazy(chk, "closed-form-s2", "s_2 - a_1 s_1 + a_2 = -g", [&] { return qa.s(2) - qa.mul(qa.a(1), qa.s(1)) + qa.a(2); },
               [&] { return S(-1) * qa.g(); });
    }
}

// ---------------------------------------------------------------- inversion

template <class S>
void verifyInversionIdentities(const QuantumMatrixAlgebra<S>& qa, Checker& chk) {
    const auto& red = qa.reducer();
    const S mu = qa.params().mu;
    const auto gp = operatorG(qa.pair());
    chk.run("composition", "xi theta = theta xi = (M -> G^-1 M G)", [&]() -> std::optional<nlohmann::json> {
        auto ad = MatrixLinearMap<S>::sandwich(gp.Ginv, gp.G);
        auto xt = qa.xi() * qa.theta(), tx = qa.theta() * qa.xi();
        if (xt != ad) return nlohmann::json{{"order", "xi theta"}, {"diff", mapDiff(xt, ad)}};
        if (tx != ad) return nlohmann::json{{"order", "theta xi"}, {"diff", mapDiff(tx, ad)}};
        return std::nullopt;
    });
    if (qa.maxDegree() < 2) return;
    eqLazy(chk, "M-inverse-right", "M mu xi(M) = I g", [&] { return qa.mul(qa.M(), mu * red.apply(qa.xi(), qa.M())); },
           [&] { return qa.identityTimes(qa.g()); });
    eqLazy(chk, "M-inverse-left", "mu theta^-1(M) M = I g", [&] { return qa.mul(mu * red.apply(qa.thetaInv(), qa.M()), qa.M()); },
           [&] { return qa.identityTimes(qa.g()); });
    if (qa.maxDegree() < 3) {
        chk.skip("Mj", "M g = g G^-1 M G", overflowReason(3, qa.maxDegree()));
        return;
    }
    eqLazy(chk, "Mj", "M g = g G^-1 M G", [&] { return qa.rightTimes(qa.M(), qa.g()); },
           [&] { return qa.leftTimes(qa.g(), red.times(red.times(gp.Ginv, qa.M()), gp.G)); });
}

#define QMBMW_INSTANTIATE(S)                                                                   \
    template int degreeTwoRankOracle(const CompatiblePair<S>&);                                \
    template int degreeTwoSpectralOracle(const Representation<S>&);                            \
    template void verifyReducer(const QuantumMatrixAlgebra<S>&, Checker&);                     \
    template void verifyCopies(const QuantumMatrixAlgebra<S>&, Checker&);                      \
    template void verifyCharacteristic(const QuantumMatrixAlgebra<S>&, Checker&);              \
    template void verifyDescendants(const QuantumMatrixAlgebra<S>&, Checker&);                 \
    template void verifyStarIdentities(const QuantumMatrixAlgebra<S>&, Checker&);              \
    template void verifyMt(const QuantumMatrixAlgebra<S>&, Checker&);                          \
    template void verifyLemma51(const QuantumMatrixAlgebra<S>&, Checker&);                     \
    template void verifyNewtonWronski(const QuantumMatrixAlgebra<S>&, int, Checker&);          \
    template void verifyInversionIdentities(const QuantumMatrixAlgebra<S>&, Checker&);

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
