#pragma once

#include "qmbmw/scalar.hpp"

#include <optional>
#include <string>

namespace qmbmw {

struct InadmissibleParameters : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Side { Antisym, Sym, Both };

template <class S>
struct AlgebraParams {
    S q;
    S mu;
    S eta;
    int maxOrder = 4;

    // eta = (q - mu)(1/q + mu) / (mu (q - 1/q)); throws on the excluded values of q and mu
    static AlgebraParams make(const S& q, const S& mu, int maxOrder = 4);
};

template <class S>
S qNumber(int i, const AlgebraParams<S>& p) {
    const S& q = p.q;
    return (power(q, i) - power(q, -i)) / (q - q.inverse());
}

struct Admissibility {
    bool ok = true;
    int j = 0;               // first failing order
    Side side = Side::Both;  // which inequality failed
    std::string reason;
};

template <class S>
Admissibility checkAdmissible(const AlgebraParams<S>& p, int n, Side side);

}  // namespace qmbmw
