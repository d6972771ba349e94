#include "qmbmw/scalar.hpp"

#include <charconv>

namespace qmbmw {

Rational::Rational(long num, long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    mpz_class num, den(1);
    try {
        if (slash == std::string::npos) {
            if (s.empty() || num.set_str(s, 10) != 0) throw ParseError("bad rational '" + s + "'");
        } else {
            if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
                throw ParseError("bad rational '" + s + "'");
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + s + "'");
    }
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    mpq_class v(num, den);
    v.canonicalize();
    return Rational(v);
}

std::string Rational::str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::inverse() const {
    if (isZero()) throw DivisionByZero("inverse of rational zero");
    Rational r;
    r.v_ = 1 / v_;
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.isZero()) throw DivisionByZero("rational division by zero");
    v_ /= o.v_;
    return *this;
}

void Rational::addMul(const Rational& b, const Rational& c) {
    thread_local mpq_t t;
    thread_local bool init = false;
    if (!init) {
        mpq_init(t);
        init = true;
    }
    mpq_mul(t, b.v_.get_mpq_t(), c.v_.get_mpq_t());
    mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), t);
}

thread_local std::uint64_t ModP::p_ = 2147483659ULL;

ModP::ModP(long v) {
    long m = v % static_cast<long>(p_);
    if (m < 0) m += static_cast<long>(p_);
    v_ = static_cast<std::uint64_t>(m);
}

ModP::Scope::Scope(std::uint64_t p) : prev_(p_) {
    if (p < 3 || p >= (1ULL << 32) || !isPrime(p)) throw std::invalid_argument("modulus must be an odd prime below 2^32");
    p_ = p;
}

ModP::Scope::~Scope() { p_ = prev_; }

ModP ModP::fromRational(const mpq_class& q) {
    mpz_class p(static_cast<unsigned long>(p_));
    mpz_class n = q.get_num() % p, d = q.get_den() % p;
    if (n < 0) n += p;
    if (d == 0) throw DivisionByZero("denominator vanishes modulo " + std::to_string(p_));
    ModP a, b;
    a.v_ = n.get_ui();
    b.v_ = d.get_ui();
    return a / b;
}

ModP ModP::parse(std::string_view text) {
    // "r mod p"
    auto pos = text.find("mod");
    if (pos == std::string_view::npos) throw ParseError("bad modular literal");
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    auto rs = trim(text.substr(0, pos)), ps = trim(text.substr(pos + 3));
    std::uint64_t r = 0, p = 0;
    if (std::from_chars(rs.data(), rs.data() + rs.size(), r).ec != std::errc() ||
        std::from_chars(ps.data(), ps.data() + ps.size(), p).ec != std::errc())
        throw ParseError("bad modular literal '" + std::string(text) + "'");
    if (p != p_) throw ParseError("modular literal for p=" + std::to_string(p) + " but active prime is " + std::to_string(p_));
    if (r >= p) throw ParseError("modular residue out of range");
    ModP x;
    x.v_ = r;
    return x;
}

std::string ModP::str() const { return std::to_string(v_) + " mod " + std::to_string(p_); }

ModP ModP::inverse() const {
    if (v_ == 0) throw DivisionByZero("inverse of zero modulo " + std::to_string(p_));
    std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p_), nr = static_cast<std::int64_t>(v_);
    while (nr) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p_);
    ModP x;
    x.v_ = static_cast<std::uint64_t>(t);
    return x;
}

namespace {

std::uint64_t powMod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    unsigned __int128 r = 1, x = b % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

bool isPrime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powMod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * x % n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t nextPrime(std::uint64_t from) {
    for (std::uint64_t n = from + 1;; ++n) {
        if (n >= (1ULL << 32)) throw std::out_of_range("no prime below 2^32 above start");
        if (isPrime(n)) return n;
    }
}

}  // namespace qmbmw
