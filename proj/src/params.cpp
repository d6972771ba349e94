#include "qmbmw/params.hpp"

namespace qmbmw {

template <class S>
AlgebraParams<S> AlgebraParams<S>::make(const S& q, const S& mu, int maxOrder) {
    if (q.isZero() || q == S(1) || q == S(-1)) throw InadmissibleParameters("q must avoid 0, 1, -1");
    if (mu.isZero() || mu == q || mu == -q.inverse()) throw InadmissibleParameters("mu must avoid 0, q, -1/q");
    AlgebraParams p;
    p.q = q;
    p.mu = mu;
    p.eta = (q - mu) * (q.inverse() + mu) / (mu * (q - q.inverse()));
    p.maxOrder = maxOrder;
    return p;
}

template <class S>
Admissibility checkAdmissible(const AlgebraParams<S>& p, int n, Side side) {
    Admissibility v;
    for (int j = 2; j <= n; ++j) {
        if (qNumber(j, p).isZero()) {
            v = {false, j, side, "j_q = 0 at j=" + std::to_string(j)};
            return v;
        }
        if (side != Side::Sym && p.mu == -power(p.q, -2 * j + 3)) {
            v = {false, j, Side::Antisym, "mu = -q^" + std::to_string(-2 * j + 3) + " at j=" + std::to_string(j)};
            return v;
        }
        if (side != Side::Antisym && p.mu == power(p.q, 2 * j - 3)) {
            v = {false, j, Side::Sym, "mu = q^" + std::to_string(2 * j - 3) + " at j=" + std::to_string(j)};
            return v;
        }
    }
    return v;
}

template struct AlgebraParams<Rational>;
template struct AlgebraParams<ModP>;
template Admissibility checkAdmissible(const AlgebraParams<Rational>&, int, Side);
template Admissibility checkAdmissible(const AlgebraParams<ModP>&, int, Side);

}  // namespace qmbmw
