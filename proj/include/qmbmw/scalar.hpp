#pragma once

// Exact coefficient fields: big rationals (GMP) and prime fields Z/p with p < 2^32.

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmbmw {

struct DivisionByZero : std::domain_error {
    using std::domain_error::domain_error;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class v);

    static Rational parse(std::string_view text);
    std::string str() const;

    bool isZero() const { return sgn(v_) == 0; }
    Rational inverse() const;
    const mpq_class& value() const { return v_; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

    // fused a += b*c, avoids a temporary in the hot loops
    void addMul(const Rational& b, const Rational& c);

private:
    mpq_class v_;
};

class ModP {
public:
    ModP() = default;
    ModP(long v);  // NOLINT(google-explicit-constructor)

    static std::uint64_t modulus() { return p_; }

    // Sets the active prime for the current thread while alive.
    class Scope {
    public:
        explicit Scope(std::uint64_t p);
        ~Scope();
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;
    private:
        std::uint64_t prev_;
    };

    static ModP fromRational(const mpq_class& q);
    static ModP parse(std::string_view text);
    std::string str() const;

    bool isZero() const { return v_ == 0; }
    ModP inverse() const;
    std::uint64_t raw() const { return v_; }

    ModP& operator+=(const ModP& o) { v_ += o.v_; if (v_ >= p_) v_ -= p_; return *this; }
    ModP& operator-=(const ModP& o) { v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_; return *this; }
    ModP& operator*=(const ModP& o) { v_ = (v_ * o.v_) % p_; return *this; }
    ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }

    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    friend ModP operator-(const ModP& a) { ModP r; r.v_ = a.v_ ? p_ - a.v_ : 0; return r; }
    friend bool operator==(const ModP& a, const ModP& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ModP& a, const ModP& b) { return a.v_ != b.v_; }

    void addMul(const ModP& b, const ModP& c) { v_ = (v_ + b.v_ * c.v_ % p_) % p_; }

private:
    std::uint64_t v_ = 0;
    static thread_local std::uint64_t p_;
};

bool isPrime(std::uint64_t n);
// First prime strictly above `from` (and below 2^32).
std::uint64_t nextPrime(std::uint64_t from);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr const char* name = "rational";
    static Rational fromRational(const Rational& r) { return r; }
};

template <>
struct ScalarTraits<ModP> {
    static constexpr const char* name = "modular";
    static ModP fromRational(const Rational& r) { return ModP::fromRational(r.value()); }
};

template <class S>
S fromRational(const Rational& r) { return ScalarTraits<S>::fromRational(r); }

template <class S>
S parseScalar(std::string_view text) {
    if constexpr (std::is_same_v<S, ModP>) {
        if (text.find("mod") != std::string_view::npos) return ModP::parse(text);
    }
    return fromRational<S>(Rational::parse(text));
}

template <class S>
S power(const S& x, int e) {
    if (e < 0) return power(x.inverse(), -e);
    S r(1), b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace qmbmw

namespace Eigen {

template <>
struct NumTraits<qmbmw::Rational> : GenericNumTraits<qmbmw::Rational> {
    using Real = qmbmw::Rational;
    using NonInteger = qmbmw::Rational;
    using Nested = qmbmw::Rational;
    using Literal = qmbmw::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32
    };
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qmbmw::ModP> : GenericNumTraits<qmbmw::ModP> {
    using Real = qmbmw::ModP;
    using NonInteger = qmbmw::ModP;
    using Nested = qmbmw::ModP;
    using Literal = qmbmw::ModP;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
