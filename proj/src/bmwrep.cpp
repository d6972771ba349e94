#include "qmbmw/bmwrep.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace qmbmw {

BmwWord reverse(const BmwWord& w) { return BmwWord(w.rbegin(), w.rend()); }

BmwWord shiftUp(const BmwWord& w, int k) {
    BmwWord out = w;
    for (auto& l : out) l.i += k;
    return out;
}

BmwWord invertWord(const BmwWord& w) {
    BmwWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->g == Gen::Kappa) throw std::invalid_argument("invertWord: kappa is not invertible");
        out.push_back({it->g == Gen::Sigma ? Gen::SigmaInv : Gen::Sigma, it->i});
    }
    return out;
}

BmwWord tauWord(int n) {
    BmwWord w;
    for (int j = 1; j < n; ++j)
        for (int i = j; i >= 1; --i) w.push_back(sigma(i));
    return w;
}

int maxLeg(const BmwWord& w) {
    int m = 0;
    for (const auto& l : w) m = std::max(m, l.i);
    return m;
}

std::string wordString(const BmwWord& w) {
    if (w.empty()) return "1";
    std::ostringstream o;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) o << ' ';
        o << (w[k].g == Gen::Sigma ? "s" : w[k].g == Gen::SigmaInv ? "S" : "k") << w[k].i;
    }
    return o.str();
}

BmwWord parseWord(const std::string& s) {
    std::istringstream in(s);
    std::string tok;
    BmwWord w;
    while (in >> tok) {
        if (tok == "1") continue;
        if (tok.size() < 2) throw ParseError("bad letter '" + tok + "'");
        Gen g;
        switch (tok[0]) {
            case 's': g = Gen::Sigma; break;
            case 'S': g = Gen::SigmaInv; break;
            case 'k': g = Gen::Kappa; break;
            default: throw ParseError("bad letter '" + tok + "'");
        }
        int i = std::stoi(tok.substr(1));
        if (i < 1) throw ParseError("leg index must be positive");
        w.push_back({g, i});
    }
    return w;
}

template <class S>
BmwCombination<S> BmwCombination<S>::word(const BmwWord& w, const S& c) {
    BmwCombination out;
    if (!c.isZero()) out.terms_.emplace(w, c);
    return out;
}

template <class S>
BmwCombination<S>& BmwCombination<S>::operator+=(const BmwCombination& o) {
    for (const auto& [w, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }
    return *this;
}

template <class S>
BmwCombination<S>& BmwCombination<S>::operator*=(const S& s) {
    if (s.isZero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= s;
    return *this;
}

template <class S>
BmwCombination<S> BmwCombination<S>::multiply(const BmwCombination& a, const BmwCombination& b) {
    BmwCombination out;
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_) {
            BmwWord w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out += word(w, ca * cb);
        }
    return out;
}

template <class S>
BmwCombination<S> BmwCombination<S>::reversed() const {
    BmwCombination out;
    for (const auto& [w, c] : terms_) out += word(reverse(w), c);
    return out;
}

template <class S>
BmwCombination<S> BmwCombination<S>::shifted(int k) const {
    BmwCombination out;
    for (const auto& [w, c] : terms_) out += word(shiftUp(w, k), c);
    return out;
}

template <class S>
int BmwCombination<S>::maxLeg() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, qmbmw::maxLeg(t.first));
    return m;
}

namespace {

template <class S>
std::pair<S, S> baxterCoefficients(int eps, const S& x, const AlgebraParams<S>& p) {
    const S& q = p.q;
    S alpha = -S(eps) * power(q, -eps) * p.mu.inverse();
    S den = alpha * x + S(1);
    if (den.isZero()) throw SpectralPole("spectral parameter at the pole -1/alpha");
    return {(x - S(1)) / (q - q.inverse()), (x - S(1)) / den};
}

// a: eps = -1, s: eps = +1
template <class S>
BmwCombination<S> idempotentWord(int eps, int order, const AlgebraParams<S>& p) {
    using C = BmwCombination<S>;
    C cur = C::unit();
    for (int k = 1; k < order; ++k) {
        S coef = power(p.q, -eps * k) / qNumber(k + 1, p);
        cur = coef * (cur * baxterized(k, eps, power(p.q, 2 * eps * k), p) * cur);
    }
    return cur;
}

}  // namespace

template <class S>
BmwCombination<S> baxterized(int i, int eps, const S& x, const AlgebraParams<S>& p) {
    using C = BmwCombination<S>;
    auto [cs, ck] = baxterCoefficients(eps, x, p);
    return C::unit() + C::word({sigma(i)}, cs) + C::word({kappa(i)}, ck);
}

template <class S>
BmwCombination<S> antisymmetrizerWord(int order, const AlgebraParams<S>& p) {
    return idempotentWord(-1, order, p);
}

template <class S>
BmwCombination<S> symmetrizerWord(int order, const AlgebraParams<S>& p) {
    return idempotentWord(+1, order, p);
}

template <class S>
BmwCombination<S> contractorWord(int twoI, const AlgebraParams<S>& p) {
    using C = BmwCombination<S>;
    if (twoI == 0) return C::unit();
    C c = C::word({kappa(1)}, p.eta.inverse());
    for (int i = 1; 2 * i < twoI; ++i) {
        C up = c.shifted(1);
        c = up * C::word({kappa(1), kappa(2 * i + 1)}) * up;
    }
    return c;
}

template <class S>
BmwCombination<S> contractorChainWord(int twoI, const AlgebraParams<S>& p) {
    using C = BmwCombination<S>;
    const int i = twoI / 2;
    if (i <= 1) return contractorWord(twoI, p);
    BmwWord w;
    for (int k = 2 * i - 1; k >= i + 1; --k) w.push_back(kappa(k));
    for (int k = 1; k <= i; ++k) w.push_back(kappa(k));
    return contractorWord(twoI - 2, p).shifted(1) * C::word(w, p.eta.inverse());
}

// ---------------------------------------------------------------- Representation

template <class S>
TensorOperator<S> Representation<S>::gen(Letter l, int n) const {
    if (l.i < 1 || l.i > n - 1) throw LegRangeError("generator index " + std::to_string(l.i) + " out of range for n=" + std::to_string(n));
    auto key = std::make_tuple(static_cast<int>(l.g), l.i, n);
    {
        std::shared_lock lock(mu_);
        auto it = gens_.find(key);
        if (it != gens_.end()) return it->second;
    }
    const Op& base = l.g == Gen::Sigma ? r_.R : l.g == Gen::SigmaInv ? r_.Rinv : r_.K;
    Op x = embedAt(base, l.i, n);
    std::unique_lock lock(mu_);
    return gens_.emplace(key, std::move(x)).first->second;
}

template <class S>
TensorOperator<S> Representation<S>::represent(const BmwWord& w, int n) const {
    Op out = Op::identity(r_.N, n);
    for (const auto& l : w) out = out * gen(l, n);
    return out;
}

template <class S>
TensorOperator<S> Representation<S>::represent(const BmwCombination<S>& c, int n) const {
    Op out(r_.N, n);
    for (const auto& [w, coef] : c.terms()) out += coef * represent(w, n);
    return out;
}

template <class S>
TensorOperator<S> Representation<S>::baxterized(int i, int eps, const S& x, int n) const {
    auto [cs, ck] = baxterCoefficients(eps, x, r_.params);
    return Op::identity(r_.N, n) + cs * gen(sigma(i), n) + ck * gen(kappa(i), n);
}

template <class S>
TensorOperator<S> Representation<S>::step(const AlgebraParams<S>& p, int eps, const Op& prev, int k, int variant) const {
    const int n = k + 1;
    Op a = variant == 1 ? embed(prev, [&] {
        std::vector<int> legs(k);
        for (int l = 0; l < k; ++l) legs[l] = l + 1;
        return legs;
    }(), n)
                        : shiftUp(prev, 1, n);
    const int at = variant == 1 ? k : 1;
    auto [cs, ck] = baxterCoefficients(eps, power(p.q, 2 * eps * k), p);
    Op b = Op::identity(r_.N, n) + cs * embedAt(r_.R, at, n) + ck * embedAt(r_.K, at, n);
    S coef = power(p.q, -eps * k) / qNumber(k + 1, p);
    return coef * (a * b * a);
}

template <class S>
TensorOperator<S> Representation<S>::cached(Kind k, int order, int variant) const {
    auto key = std::make_tuple(static_cast<int>(k), order, variant);
    {
        std::shared_lock lock(mu_);
        auto it = idem_.find(key);
        if (it != idem_.end()) return it->second;
    }
    Op x = build(k, order, variant);
    std::unique_lock lock(mu_);
    return idem_.emplace(key, std::move(x)).first->second;
}

template <class S>
TensorOperator<S> Representation<S>::build(Kind k, int order, int variant) const {
    const auto& p = r_.params;
    if (k == Kind::C) {
        if (order == 0) return Op::identity(r_.N, 1);
        if (order == 2) return p.eta.inverse() * r_.K;
        const int i = order / 2;
        Op up = shiftUp(cached(Kind::C, order - 2, 1), 1, order);
        if (variant == 1) return up * embedAt(r_.K, 1, order) * embedAt(r_.K, order - 1, order) * up;
        Op chain = Op::identity(r_.N, order);
        for (int m = 2 * i - 1; m >= i + 1; --m) chain = chain * embedAt(r_.K, m, order);
        for (int m = 1; m <= i; ++m) chain = chain * embedAt(r_.K, m, order);
        return p.eta.inverse() * (up * chain);
    }
    if (order == 1) return Op::identity(r_.N, 1);
    const int eps = k == Kind::A ? -1 : 1;
    return step(p, eps, cached(k, order - 1, variant), order - 1, variant);
}

namespace {

template <class S>
TensorOperator<S> onFirstLegs(const TensorOperator<S>& x, int n) {
    if (x.legs() > n) throw LegRangeError("operator has more legs than requested");
    if (x.legs() == n) return x;
    std::vector<int> legs(x.legs());
    for (int l = 0; l < x.legs(); ++l) legs[l] = l + 1;
    return embed(x, legs, n);
}

}  // namespace

template <class S>
TensorOperator<S> Representation<S>::antisymmetrizer(int order, int n, int variant) const {
    auto adm = checkAdmissible(r_.params, order, Side::Antisym);
    if (!adm.ok) throw InadmissibleParameters(adm.reason);
    if (order > n) throw LegRangeError("antisymmetrizer order exceeds n");
    return onFirstLegs(cached(Kind::A, order, variant), n);
}

template <class S>
TensorOperator<S> Representation<S>::symmetrizer(int order, int n, int variant) const {
    auto adm = checkAdmissible(r_.params, order, Side::Sym);
    if (!adm.ok) throw InadmissibleParameters(adm.reason);
    if (order > n) throw LegRangeError("symmetrizer order exceeds n");
    return onFirstLegs(cached(Kind::Sy, order, variant), n);
}

template <class S>
TensorOperator<S> Representation<S>::antisymmetrizerWith(const AlgebraParams<S>& p, int order, int n, int variant) const {
    auto adm = checkAdmissible(p, order, Side::Antisym);
    if (!adm.ok) throw InadmissibleParameters(adm.reason);
    if (order > n) throw LegRangeError("antisymmetrizer order exceeds n");
    Op cur = Op::identity(r_.N, 1);
    for (int k = 1; k < order; ++k) cur = step(p, -1, cur, k, variant);
    return onFirstLegs(cur, n);
}

template <class S>
TensorOperator<S> Representation<S>::contractor(int twoI, int n) const {
    if (twoI < 0 || twoI % 2 || twoI > n) throw LegRangeError("contractor order must be even and at most n");
    if (twoI == 0) return Op::identity(r_.N, n);
    return onFirstLegs(cached(Kind::C, twoI, 1), n);
}

template <class S>
TensorOperator<S> Representation<S>::contractorChain(int twoI, int n) const {
    if (twoI < 0 || twoI % 2 || twoI > n) throw LegRangeError("contractor order must be even and at most n");
    if (twoI <= 2) return contractor(twoI, n);
    return onFirstLegs(build(Kind::C, twoI, 2), n);
}

// ---------------------------------------------------------------- verification

namespace {

// skip reason naming the first violated constraint
template <class S>
std::string inadmissible(const AlgebraParams<S>& p, int n, Side side) {
    return "inadmissible parameters: " + checkAdmissible(p, n, side).reason;
}

template <class S>
using OpPairs = std::vector<std::pair<TensorOperator<S>, TensorOperator<S>>>;

template <class S>
std::optional<nlohmann::json> allEqual(const OpPairs<S>& pairs) {
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].first != pairs[k].second)
            return nlohmann::json{{"equation", k + 1}, {"entries", operatorDiff(pairs[k].first, pairs[k].second)}};
    return std::nullopt;
}

std::string tag(std::initializer_list<std::pair<const char*, int>> kv) {
    std::string s = "[";
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) s += ",";
        first = false;
        s += k;
        s += "=";
        s += std::to_string(v);
    }
    return s + "]";
}

template <class S>
S randomScalar(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(1, 9), den(1, 9), sign(0, 1);
    long a = num(rng) * (sign(rng) ? 1 : -1);
    return fromRational<S>(Rational(a, den(rng)));
}

// X = lambda C for some lambda; returns lambda
template <class S>
std::optional<S> proportionality(const TensorOperator<S>& x, const TensorOperator<S>& c) {
    for (typename TensorOperator<S>::Index r = 0; r < c.dim(); ++r) {
        if (c.row(r).empty()) continue;
        const auto& e = c.row(r).front();
        S lam = x.at(r, e.col) / e.value;
        if (x == lam * c) return lam;
        return std::nullopt;
    }
    return std::nullopt;
}

// right-multiplies by generator images one at a time, keeping low-rank operands cheap
template <class S>
TensorOperator<S> timesWord(const Representation<S>& rep, TensorOperator<S> x, const BmwWord& w) {
    for (const auto& l : w) x = x * rep.gen(l, x.legs());
    return x;
}

template <class S>
class SparseSpan {
public:
    using Index = typename TensorOperator<S>::Index;
    using Vec = std::vector<std::pair<Index, S>>;

    static Vec flatten(const TensorOperator<S>& x) {
        Vec v;
        for (Index r = 0; r < x.dim(); ++r)
            for (const auto& e : x.row(r)) v.emplace_back(r * x.dim() + e.col, e.value);
        return v;
    }
    // reduces v against the basis; true if v was already in the span
    bool reduce(Vec& v) const {
        while (!v.empty()) {
            auto it = basis_.find(v.front().first);
            if (it == basis_.end()) return false;
            v = axpy(v, it->second, v.front().second / it->second.front().second);
        }
        return true;
    }
    bool contains(const TensorOperator<S>& x) const {
        Vec v = flatten(x);
        return reduce(v);
    }
    void add(const TensorOperator<S>& x) {
        Vec v = flatten(x);
        if (!reduce(v)) basis_.emplace(v.front().first, std::move(v));
    }
    int dim() const { return static_cast<int>(basis_.size()); }

private:
    // v - s b
    static Vec axpy(const Vec& v, const Vec& b, const S& s) {
        Vec out;
        out.reserve(v.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < v.size() || j < b.size()) {
            if (j == b.size() || (i < v.size() && v[i].first < b[j].first)) {
                out.push_back(v[i++]);
            } else if (i == v.size() || b[j].first < v[i].first) {
                out.emplace_back(b[j].first, -(s * b[j].second));
                ++j;
            } else {
                S val = v[i].second - s * b[j].second;
                if (!val.isZero()) out.emplace_back(v[i].first, val);
                ++i;
                ++j;
            }
        }
        return out;
    }
    std::map<Index, Vec> basis_;
};

// depth-first over words of length <= maxLen in the given letters; f(word, c*rho(word)) returns false to stop
template <class S, class F>
void forEachWord(const Representation<S>& rep, const TensorOperator<S>& start, const std::vector<Letter>& letters, int maxLen, F&& f) {
    BmwWord w;
    std::function<bool(const TensorOperator<S>&)> rec = [&](const TensorOperator<S>& x) {
        if (!f(w, x)) return false;
        if (static_cast<int>(w.size()) == maxLen) return true;
        for (const auto& l : letters) {
            w.push_back(l);
            bool go = rec(x * rep.gen(l, x.legs()));
            w.pop_back();
            if (!go) return false;
        }
        return true;
    };
    rec(start);
}

}  // namespace

template <class S>
void verifyRepresentation(const Representation<S>& rep, std::uint64_t seed, Checker& chk) {
    using Op = TensorOperator<S>;
    using C = BmwCombination<S>;
    const auto& b = rep.rmatrix();
    const auto& p = b.params;
    const S q = p.q, mu = p.mu;
    const int N = b.N;

    chk.equal("rep-braid", "rho(s1 s2 s1) = rho(s2 s1 s2)", rep.represent(parseWord("s1 s2 s1"), 3), rep.represent(parseWord("s2 s1 s2"), 3));
    chk.equal("rep-kappa-sigma", "rho(k1 s1) = mu K1", rep.represent(parseWord("k1 s1"), 2), mu * b.K);
    chk.equal("rep-kappa-string", "rho(k1 k2 k1) = K1", rep.represent(parseWord("k1 k2 k1"), 3), embedAt(b.K, 1, 3));
    chk.expect("rep-leg-range", "rho(s_i) needs i <= n-1", [&] {
        try {
            rep.gen(sigma(3), 3);
        } catch (const LegRangeError&) {
            return true;
        }
        return false;
    }());

    std::mt19937_64 rng(seed);
    const std::vector<Letter> alphabet = {sigma(1), sigma(2), sigma(3), sigmaInv(1), sigmaInv(2), sigmaInv(3), kappa(1), kappa(2), kappa(3)};
    auto randomWord = [&]() {
        std::uniform_int_distribution<int> len(1, 4), pick(0, static_cast<int>(alphabet.size()) - 1);
        BmwWord w;
        for (int k = len(rng); k > 0; --k) w.push_back(alphabet[pick(rng)]);
        return w;
    };
    for (int t = 0; t < 5; ++t) {
        BmwWord w1 = randomWord(), w2 = randomWord(), w12 = w1;
        w12.insert(w12.end(), w2.begin(), w2.end());
        chk.equal("rep-homomorphism" + tag({{"t", t}}), "rho(w1 w2) = rho(w1) rho(w2)", rep.represent(w12, 4),
                  rep.represent(w1, 4) * rep.represent(w2, 4));
    }

    for (int eps : {-1, 1}) {
        chk.expect("baxterized-unit" + tag({{"eps", eps}}), "sigma(1) = 1", baxterized(1, eps, S(1), p).terms() == C::unit().terms());
    }
    {
        const S two = qNumber(2, p);
        Op I = Op::identity(N, 2);
        chk.run("baxterized-a2", "a2 = (q/2_q) sigma^-(q^-2) = (qI-R)(mu I-R)/(2_q (mu+1/q))", [&]() -> std::optional<nlohmann::json> {
            return allEqual<S>({{(q / two) * rep.baxterized(1, -1, power(q, -2), 2), rep.antisymmetrizer(2, 2)},
                                {((two * (mu + q.inverse())).inverse()) * ((q * I - b.R) * (mu * I - b.R)), rep.antisymmetrizer(2, 2)}});
        });
        chk.run("baxterized-s2", "s2 = (1/(q 2_q)) sigma^+(q^2) = (I/q+R)(mu I-R)/(2_q (mu-q))", [&]() -> std::optional<nlohmann::json> {
            return allEqual<S>({{(q * two).inverse() * rep.baxterized(1, 1, power(q, 2), 2), rep.symmetrizer(2, 2)},
                                {((two * (mu - q)).inverse()) * ((q.inverse() * I + b.R) * (mu * I - b.R)), rep.symmetrizer(2, 2)}});
        });
    }
    for (int eps : {-1, 1}) {
        chk.expect("baxterized-pole" + tag({{"eps", eps}}), "sigma(x) undefined at x = -1/alpha", [&] {
            S alpha = -S(eps) * power(q, -eps) * mu.inverse();
            try {
                baxterized(1, eps, -alpha.inverse(), p);
            } catch (const SpectralPole&) {
                return true;
            }
            return false;
        }());
        for (int t = 0; t < 10; ++t) {
            S x, y;
            for (;;) {
                x = randomScalar<S>(rng);
                y = randomScalar<S>(rng);
                try {
                    baxterized(1, eps, x, p);
                    baxterized(1, eps, y, p);
                    baxterized(1, eps, x * y, p);
                    break;
                } catch (const SpectralPole&) {
                }
            }
            const std::string tg = tag({{"eps", eps}, {"t", t}});
            chk.equal("baxterized-ybe" + tg, "s1(x) s2(xy) s1(y) = s2(y) s1(xy) s2(x)",
                      rep.baxterized(1, eps, x, 3) * rep.baxterized(2, eps, x * y, 3) * rep.baxterized(1, eps, y, 3),
                      rep.baxterized(2, eps, y, 3) * rep.baxterized(1, eps, x * y, 3) * rep.baxterized(2, eps, x, 3));
            chk.equal("baxterized-locality" + tg, "s1(x) s3(y) = s3(y) s1(x)", rep.baxterized(1, eps, x, 4) * rep.baxterized(3, eps, y, 4),
                      rep.baxterized(3, eps, y, 4) * rep.baxterized(1, eps, x, 4));
        }
    }
}

template <class S>
void verifyProposition22(const Representation<S>& rep, int nMax, Checker& chk) {
    using Op = TensorOperator<S>;
    const auto& b = rep.rmatrix();
    const auto& p = b.params;
    const S q = p.q, qi = q.inverse(), mu = p.mu;
    const int N = b.N;
    auto R_ = [&](int i, int n) { return rep.gen(sigma(i), n); };
    auto K_ = [&](int i, int n) { return rep.gen(kappa(i), n); };

    struct SideInfo {
        const char* name;
        Side side;
        int eps;
        S eig;
    };
    const SideInfo sides[] = {{"a", Side::Antisym, -1, -qi}, {"s", Side::Sym, 1, q}};
    auto idem = [&](const SideInfo& sd, int order, int n, int variant = 1) {
        return sd.eps < 0 ? rep.antisymmetrizer(order, n, variant) : rep.symmetrizer(order, n, variant);
    };

    chk.equal("resolution", "a2 + s2 + c2 = I", rep.antisymmetrizer(2, 2) + rep.symmetrizer(2, 2) + rep.contractor(2, 2), Op::identity(N, 2));

    for (const auto& sd : sides) {
        const std::string pre = sd.name;
        for (int n = 2; n <= nMax; ++n) {
            auto adm = checkAdmissible(p, n, sd.side);
            const std::string tn = tag({{"n", n}});
            if (!adm.ok) {
                chk.skip(pre + "-order" + tn, "order-n idempotent exists", "inadmissible parameters: " + adm.reason);
                continue;
            }
            Op x = idem(sd, n, n);
            chk.equal(pre + "-variants" + tn, "both iterative definitions agree", x, idem(sd, n, n, 2));
            chk.equal(pre + "-idempotent" + tn, "x^2 = x", x * x, x);
            for (int i = 1; i < n; ++i) {
                chk.run(pre + "-idemp-1" + tag({{"n", n}, {"i", i}}), sd.eps < 0 ? "a s_i = s_i a = -a/q" : "s s_i = s_i s = q s",
                        [&]() -> std::optional<nlohmann::json> {
                            return allEqual<S>({{x * R_(i, n), sd.eig * x}, {R_(i, n) * x, sd.eig * x}});
                        });
            }
            chk.run(pre + "-central" + tn, "x commutes with every s_i and k_i", [&]() -> std::optional<nlohmann::json> {
                OpPairs<S> pairs;
                for (int i = 1; i < n; ++i) {
                    pairs.push_back({x * R_(i, n), R_(i, n) * x});
                    pairs.push_back({x * K_(i, n), K_(i, n) * x});
                }
                return allEqual(pairs);
            });
            // a sigma^-(q^2) = 0 and, under iota, s sigma^+(q^-2) = 0
            {
                S xs = power(q, -2 * sd.eps);
                for (int i = 1; i < n; ++i) {
                    const std::string name = pre + "-divide" + tag({{"n", n}, {"i", i}});
                    const char* ref = sd.eps < 0 ? "a sigma^-_i(q^2) = sigma^-_i(q^2) a = 0" : "s sigma^+_i(q^-2) = sigma^+_i(q^-2) s = 0";
                    Op bx;
                    try {
                        bx = rep.baxterized(i, sd.eps, xs, n);
                    } catch (const SpectralPole&) {
                        chk.skip(name, ref, "mu sits on the pole of the baxterized element");
                        continue;
                    }
                    chk.run(name, ref, [&]() -> std::optional<nlohmann::json> {
                        return allEqual<S>({{x * bx, Op(N, n)}, {bx * x, Op(N, n)}});
                    });
                }
            }
            for (int m = 2; m < n; ++m)
                for (int i = 0; m + i <= n; ++i) {
                    chk.run(pre + "-idemp-2" + tag({{"n", n}, {"m", m}, {"i", i}}), "x(n) x(m)^i = x(m)^i x(n) = x(n) for m+i <= n",
                            [&]() -> std::optional<nlohmann::json> {
                                Op y = shiftUp(idem(sd, m, m), i, n);
                                return allEqual<S>({{x * y, x}, {y * x, x}});
                            });
                }
        }
    }

    for (int n = 2; n <= nMax; ++n)
        for (int m = 2; m <= nMax; ++m) {
            const std::string name = "asort" + tag({{"n", n}, {"m", m}});
            if (!checkAdmissible(p, n, Side::Antisym).ok || !checkAdmissible(p, m, Side::Sym).ok) {
                chk.skip(name, "a(n) s(m) = 0",
                         checkAdmissible(p, n, Side::Antisym).ok ? inadmissible(p, m, Side::Sym) : inadmissible(p, n, Side::Antisym));
                continue;
            }
            const int legs = std::max(n, m);
            chk.run(name, "a(n) s(m) = s(m) a(n) = 0", [&]() -> std::optional<nlohmann::json> {
                Op a = rep.antisymmetrizer(n, legs), s = rep.symmetrizer(m, legs);
                return allEqual<S>({{a * s, Op(N, legs)}, {s * a, Op(N, legs)}});
            });
        }
    if (nMax >= 3 && checkAdmissible(p, 3, Side::Antisym).ok)
        chk.equal("asort-shifted", "a(3) s(2)^1 = 0", rep.antisymmetrizer(3, 3) * shiftUp(rep.symmetrizer(2, 2), 1, 3), Op(N, 3));

    for (int k = 1; 2 * k <= nMax; ++k) {
        const int n = 2 * k;
        const std::string tk = tag({{"2n", n}});
        Op c = rep.contractor(n, n);
        chk.equal("c-chain" + tk, "iterative and chain forms of c(2n) agree", c, rep.contractorChain(n, n));
        chk.equal("c-idempotent" + tk, "c^2 = c", c * c, c);
        for (int i = 1; i <= k; ++i)
            chk.run("c-idemp-c1" + tag({{"2n", n}, {"i", i}}), "c(2n) c(2i)^(n-i) = c(2i)^(n-i) c(2n) = c(2n)", [&]() -> std::optional<nlohmann::json> {
                Op y = shiftUp(rep.contractor(2 * i, 2 * i), k - i, n);
                return allEqual<S>({{c * y, c}, {y * c, c}});
            });
        for (int i = 1; i < k; ++i)
            chk.run("c-idemp-c2" + tag({{"2n", n}, {"i", i}}), "c s_i = c s_(2n-i), s_i c = s_(2n-i) c", [&]() -> std::optional<nlohmann::json> {
                return allEqual<S>({{c * R_(i, n), c * R_(n - i, n)}, {R_(i, n) * c, R_(n - i, n) * c}});
            });
        chk.run("c-idemp-c3" + tk, "c s_n = s_n c = mu c", [&]() -> std::optional<nlohmann::json> {
            return allEqual<S>({{c * R_(k, n), mu * c}, {R_(k, n) * c, mu * c}});
        });
        for (int m = k + 1; m <= nMax; ++m) {
            const int legs = std::max(n, m);
            for (const auto& sd : sides) {
                const std::string name = std::string("c-orthogonal-") + sd.name + tag({{"2n", n}, {"m", m}});
                if (!checkAdmissible(p, m, sd.side).ok) {
                    chk.skip(name, "c(2n) x(m) = 0 for m > n", inadmissible(p, m, sd.side));
                    continue;
                }
                chk.run(name, "c(2n) x(m) = x(m) c(2n) = 0 for m > n", [&]() -> std::optional<nlohmann::json> {
                    Op cc = rep.contractor(n, legs), x = idem(sd, m, legs);
                    return allEqual<S>({{cc * x, Op(N, legs)}, {x * cc, Op(N, legs)}});
                });
            }
        }
    }
}

template <class S>
void verifyMorphisms(const Representation<S>& rep, int nMax, Checker& chk) {
    using Op = TensorOperator<S>;
    const auto& b = rep.rmatrix();
    const auto& p = b.params;
    const S q = p.q;

    chk.expect("tau-trivial", "tau(1) = 1", tauWord(1).empty());
    for (int n = 2; n <= nMax; ++n) {
        const std::string tn = tag({{"n", n}});
        const bool admA = checkAdmissible(p, n, Side::Antisym).ok, admS = checkAdmissible(p, n, Side::Sym).ok;
        {
            const std::string name = "iota" + tn;
            const char* ref = "antisymmetrizer recursion at (-1/q, mu) equals s(n) at (q, mu)";
            if (!admS) {
                chk.skip(name, ref, inadmissible(p, n, Side::Sym));
            } else {
                auto pi = AlgebraParams<S>::make(-q.inverse(), p.mu, p.maxOrder);
                chk.equal(name, ref, rep.antisymmetrizerWith(pi, n, n), rep.symmetrizer(n, n));
            }
        }
        Op t = rep.represent(tauWord(n), n), ti = rep.represent(invertWord(tauWord(n)), n);
        chk.equal("tau-inverse" + tn, "rho(tau) rho(tau^-1) = I", t * ti, Op::identity(b.N, n));
        chk.run("tau-automorphism" + tn, "tau s_i tau^-1 = s_(n-i)", [&]() -> std::optional<nlohmann::json> {
            OpPairs<S> pairs;
            for (int i = 1; i < n; ++i) pairs.push_back({t * rep.gen(sigma(i), n) * ti, rep.gen(sigma(n - i), n)});
            return allEqual(pairs);
        });
        if (admA) {
            Op a = rep.antisymmetrizer(n, n);
            chk.equal("tau-conjugation-a" + tn, "tau a(n) tau^-1 = a(n)", t * a * ti, a);
            chk.equal("reversal-a" + tn, "rho(reverse(a(n))) = a(n)", rep.represent(antisymmetrizerWord(n, p).reversed(), n), a);
        } else {
            chk.skip("tau-conjugation-a" + tn, "tau a(n) tau^-1 = a(n)", inadmissible(p, n, Side::Antisym));
            chk.skip("reversal-a" + tn, "rho(reverse(a(n))) = a(n)", inadmissible(p, n, Side::Antisym));
        }
        if (admS) {
            Op s = rep.symmetrizer(n, n);
            chk.equal("tau-conjugation-s" + tn, "tau s(n) tau^-1 = s(n)", t * s * ti, s);
            chk.equal("reversal-s" + tn, "rho(reverse(s(n))) = s(n)", rep.represent(symmetrizerWord(n, p).reversed(), n), s);
        } else {
            chk.skip("tau-conjugation-s" + tn, "tau s(n) tau^-1 = s(n)", inadmissible(p, n, Side::Sym));
            chk.skip("reversal-s" + tn, "rho(reverse(s(n))) = s(n)", inadmissible(p, n, Side::Sym));
        }
    }
    for (int k = 1; 2 * k <= nMax + 1; ++k) {
        const int n = 2 * k;
        const std::string tk = tag({{"2n", n}});
        Op c = rep.contractor(n, n);
        chk.equal("reversal-c" + tk, "rho(reverse(c(2n))) = c(2n)", rep.represent(contractorWord(n, p).reversed(), n), c);
        chk.equal("reversal-c-chain" + tk, "rho(reverse(chain form of c(2n))) = c(2n)", rep.represent(contractorChainWord(n, p).reversed(), n), c);
        Op t = rep.represent(tauWord(n), n), ti = rep.represent(invertWord(tauWord(n)), n);
        chk.equal("tau-conjugation-c" + tk, "tau c(2n) tau^-1 = c(2n)", t * c * ti, c);
    }
}

template <class S>
void verifyAppendices(const Representation<S>& rep, int jMax, Checker& chk) {
    using Op = TensorOperator<S>;
    const auto& b = rep.rmatrix();
    const auto& p = b.params;
    const S q = p.q, mu = p.mu, eta = p.eta, ei = eta.inverse(), mi = mu.inverse();
    const int N = b.N;

    for (int j = 1; j <= jMax; ++j) {
        const int n = 2 * j + 1;
        const std::string tj = tag({{"j", j}});
        auto R_ = [&](int i) { return rep.gen(sigma(i), n); };
        auto K_ = [&](int i) { return rep.gen(kappa(i), n); };
        Op c = rep.contractor(2 * j, n);
        Op cup = shiftUp(rep.contractor(2 * j, 2 * j), 1, n);
        auto chain = [&](Op x, int from, int to, Gen g) {
            BmwWord w;
            if (from <= to)
                for (int i = from; i <= to; ++i) w.push_back({g, i});
            else
                for (int i = from; i >= to; --i) w.push_back({g, i});
            return timesWord(rep, std::move(x), w);
        };

        chk.equal("fup1" + tj, "c(2j) k_2j c(2j) = c(2j)/eta", c * K_(2 * j) * c, ei * c);
        chk.equal("fup3" + tj, "c(2j) s_2j c(2j) = c(2j)/(eta mu)", c * R_(2 * j) * c, (ei * mi) * c);
        {
            Op lower = j == 1 ? Op::identity(N, n) : shiftUp(rep.contractor(2 * j - 2, 2 * j - 2), 1, n);
            chk.equal("fup2" + tj, "k_2j c(2j) k_2j = k_2j c(2j-2)^1 / eta", K_(2 * j) * c * K_(2 * j), ei * (K_(2 * j) * lower));
        }
        for (int k = 1; k <= j; ++k)
            chk.equal("fup4" + tag({{"j", j}, {"k", k}}), "c(2j) s_(j+k) ... s_2j c(2j) = (eta mu)^-(j+1-k) c(2j)",
                      chain(c, j + k, 2 * j, Gen::Sigma) * c, power(ei * mi, j + 1 - k) * c);
        for (int k = 0; k < j; ++k)
            chk.equal("fup5" + tag({{"j", j}, {"k", k}}), "c(2j) s_(j-k) ... s_2j c(2j) = eta^-j mu^-(j-1-k) c(2j)",
                      chain(c, j - k, 2 * j, Gen::Sigma) * c, (power(ei, j) * power(mi, j - 1 - k)) * c);
        {
            const S f = power(ei, j);
            chk.equal("fup6" + tj, "c(2j) c(2j)^1 = eta^-j c(2j) s_2j^-1 ... s_1^-1", c * cup, f * chain(c, 2 * j, 1, Gen::SigmaInv));
            chk.equal("fup6-up" + tj, "c(2j)^1 c(2j) = eta^-j c(2j)^1 s_1 ... s_2j", cup * c, f * chain(cup, 1, 2 * j, Gen::Sigma));
            chk.equal("fup6-down" + tj, "c(2j) c(2j)^1 = eta^-j c(2j) s_2j ... s_1", c * cup, f * chain(c, 2 * j, 1, Gen::Sigma));
            chk.equal("fup6-up-inverse" + tj, "c(2j)^1 c(2j) = eta^-j c(2j)^1 s_1^-1 ... s_2j^-1", cup * c, f * chain(cup, 1, 2 * j, Gen::SigmaInv));
        }
        {
            const S lam = q - q.inverse();
            auto sp = [&](int i) { return R_(i) - lam * Op::identity(N, n); };
            Op lhs = Op::identity(N, n), rhs = Op::identity(N, n);
            for (int i = j; i >= 1; --i) lhs = lhs * sp(i);
            lhs = lhs * cup;
            for (int i = 1; i <= j; ++i) lhs = lhs * sp(i);
            for (int i = j + 1; i <= 2 * j; ++i) rhs = rhs * sp(i);
            rhs = rhs * c;
            for (int i = 2 * j; i >= j + 1; --i) rhs = rhs * sp(i);
            chk.equal("fup7" + tj, "s'_j..s'_1 c(2j)^1 s'_1..s'_j = s'_(j+1)..s'_2j c(2j) s'_2j..s'_(j+1), s' = s - (q-1/q)", lhs, rhs);
        }
        chk.equal("fup8" + tj, "c(2j)^1 c(2j) c(2j)^1 = eta^-2j c(2j)^1", cup * c * cup, power(ei, 2 * j) * cup);
        for (int k = 1; k <= j; ++k)
            chk.equal("fup9" + tag({{"j", j}, {"k", k}}), "c(2j) tau(2k)^(j-k) = mu^k c(2j)", timesWord(rep, c, shiftUp(tauWord(2 * k), j - k)),
                      power(mu, k) * c);

        // c(2j+2) tau(2j+1) = eta^j c(2j+2) c(2j) tau(2j) = (eta mu)^j c(2j+2) c(2j)
        {
            const int m = 2 * j + 2;
            Op cc = rep.contractor(m, m);
            Op ccc = cc * rep.contractor(2 * j, m);
            Op lhs = timesWord(rep, cc, tauWord(2 * j + 1));
            chk.run("remark-tau" + tj, "c(2j+2) tau(2j+1) = eta^j c(2j+2) c(2j) tau(2j) = (eta mu)^j c(2j+2) c(2j)",
                    [&]() -> std::optional<nlohmann::json> {
                        return allEqual<S>({{lhs, power(eta, j) * timesWord(rep, ccc, tauWord(2 * j))}, {lhs, power(eta * mu, j) * ccc}});
                    });
        }
    }

    // sampled primitivity and the reduction lemma on W_(2n+1)
    for (int nn = 1; nn <= jMax; ++nn) {
        const int legs = 2 * nn + 1;
        const std::string tn = tag({{"2n", 2 * nn}});
        Op c = rep.contractor(2 * nn, legs);
        std::vector<Letter> all, upper;
        for (int i = 1; i <= 2 * nn; ++i) {
            all.push_back(sigma(i));
            all.push_back(kappa(i));
            if (i > nn) {
                upper.push_back(sigma(i));
                upper.push_back(kappa(i));
            }
        }
        chk.run("primitivity" + tn, "c(2n) rho(w) c(2n) in span{c(2n)} for all words of length <= 4", [&]() -> std::optional<nlohmann::json> {
            std::optional<nlohmann::json> bad;
            long count = 0;
            forEachWord(rep, c, all, 4, [&](const BmwWord& w, const Op& cw) {
                ++count;
                if (!proportionality(cw * c, c)) {
                    bad = nlohmann::json{{"word", wordString(w)}};
                    return false;
                }
                return true;
            });
            return bad;
        });
        chk.run("reduction-lemma" + tn, "c(2n) rho(w) in c(2n) W(s_(n+1), ..., s_2n) for all words of length <= 4",
                [&]() -> std::optional<nlohmann::json> {
                    SparseSpan<S> span;
                    forEachWord(rep, c, upper, 4, [&](const BmwWord&, const Op& cw) {
                        span.add(cw);
                        return true;
                    });
                    std::optional<nlohmann::json> bad;
                    forEachWord(rep, c, all, 4, [&](const BmwWord& w, const Op& cw) {
                        if (!span.contains(cw)) {
                            bad = nlohmann::json{{"word", wordString(w)}, {"spanDim", span.dim()}};
                            return false;
                        }
                        return true;
                    });
                    return bad;
                });
    }
}

#define QMBMW_INSTANTIATE(S)                                                                     \
    template class BmwCombination<S>;                                                            \
    template class Representation<S>;                                                            \
    template BmwCombination<S> baxterized(int, int, const S&, const AlgebraParams<S>&);          \
    template BmwCombination<S> antisymmetrizerWord(int, const AlgebraParams<S>&);                \
    template BmwCombination<S> symmetrizerWord(int, const AlgebraParams<S>&);                    \
    template BmwCombination<S> contractorWord(int, const AlgebraParams<S>&);                     \
    template BmwCombination<S> contractorChainWord(int, const AlgebraParams<S>&);                \
    template void verifyRepresentation(const Representation<S>&, std::uint64_t, Checker&);       \
    template void verifyProposition22(const Representation<S>&, int, Checker&);                  \
    template void verifyMorphisms(const Representation<S>&, int, Checker&);                      \
    template void verifyAppendices(const Representation<S>&, int, Checker&);

QMBMW_INSTANTIATE(Rational)
QMBMW_INSTANTIATE(ModP)

}  // namespace qmbmw
