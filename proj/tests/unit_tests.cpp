#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmbmw/bmwrep.hpp"
#include "qmbmw/qma.hpp"
#include "qmbmw/rmatrix.hpp"
#include "qmbmw/runner.hpp"
#include "qmbmw/twistmaps.hpp"

#include <filesystem>
#include <fstream>

using namespace qmbmw;
using Op = TensorOperator<Rational>;

namespace {

const Rational kQ(7, 5);

int failures(const Report& r) { return r.failures(); }

Report runChecks(const std::function<void(Checker&)>& body) {
    Report rep;
    Checker chk(rep, "unit", nlohmann::json::object());
    body(chk);
    return rep;
}

RunConfig config(const std::string& family, int dim, const std::string& f, std::vector<std::string> suites) {
    RunConfig c;
    c.family = family;
    c.dimV = dim;
    c.fChoice = f;
    c.suites = std::move(suites);
    return c;
}

}  // namespace

TEST_CASE("rational parsing, printing and division") {
    CHECK(Rational::parse("14/10") == Rational(7, 5));
    CHECK(Rational::parse("-3").str() == "-3/1");
    CHECK(Rational(0).str() == "0/1");
    CHECK_THROWS_AS(Rational::parse("7/0"), ParseError);
    CHECK_THROWS_AS(Rational::parse("x"), ParseError);
    CHECK_THROWS_AS(Rational(0).inverse(), DivisionByZero);
}

TEST_CASE("prime field arithmetic") {
    CHECK(nextPrime(1ull << 31) == 2147483659ull);
    CHECK(defaultPrimes(2) == std::vector<std::uint64_t>{2147483659ull, 2147483693ull});
    ModP::Scope scope(101);
    const ModP x = ModP::fromRational(mpq_class(7, 5));
    CHECK(x * ModP(5) == ModP(7));
    CHECK(ModP::parse(x.str()) == x);
    try {
        (void)ModP(202).inverse();
        FAIL("expected DivisionByZero");
    } catch (const DivisionByZero& e) {
        CHECK(std::string(e.what()).find("modulo 101") != std::string::npos);
    }
}

TEST_CASE("operator JSON round-trip is bit-exact") {
    const auto R = makeStandardR(Family::Orthogonal, 3, kQ).R;
    const auto j = toJson(R);
    const auto back = operatorFromJson<Rational>(nlohmann::json::parse(j.dump()));
    CHECK(back == R);
    CHECK(toJson(back) == j);
    CHECK(j["dimV"] == 3);
    CHECK(j["legs"] == 2);
}

TEST_CASE("standard parameters of SO(3) and Sp(4) at q = 7/5") {
    const auto so = makeStandardR(Family::Orthogonal, 3, kQ);
    CHECK(so.params.mu == Rational(25, 49));
    CHECK(so.params.eta == Rational(109, 35));
    const auto sp = makeStandardR(Family::Symplectic, 4, kQ);
    CHECK(sp.params.mu == -power(kQ, -5));
    CHECK(extractMu(so.R, kQ) == std::optional<Rational>(Rational(25, 49)));
}

TEST_CASE("the symplectic plane has no third antisymmetrizer") {
    const auto sp2 = makeStandardR(Family::Symplectic, 2, kQ);
    const auto adm = checkAdmissible(sp2.params, 3, Side::Antisym);
    CHECK_FALSE(adm.ok);
    CHECK(adm.j == 3);
    CHECK(adm.reason.find("mu = -q^-3") != std::string::npos);
    CHECK(checkAdmissible(sp2.params, 2, Side::Antisym).ok);
}

TEST_CASE("BMW operator checks pass and catch a perturbed entry") {
    const auto R = standardROperator(Family::Orthogonal, 3, kQ);
    CHECK(failures(runChecks([&](Checker& c) { verifyBmwOperator(R, kQ, c); })) == 0);
    // a scalar shift keeps the eigenvectors but breaks the spectrum and the braid relation
    const auto bad = R + Rational(1, 1000) * Op::identity(3, 2);
    CHECK(failures(runChecks([&](Checker& c) { verifyBmwOperator(bad, kQ, c); })) > 0);
    CHECK_THROWS(bmwFromOperator(bad, kQ));
}

TEST_CASE("idempotents: resolution of the identity and idempotency") {
    const auto B = makeStandardR(Family::Orthogonal, 3, kQ);
    Representation<Rational> rep(B);
    const auto a2 = rep.antisymmetrizer(2, 2), s2 = rep.symmetrizer(2, 2), c2 = rep.contractor(2, 2);
    CHECK(a2 * a2 == a2);
    CHECK(s2 * s2 == s2);
    CHECK(a2 + s2 + c2 == Op::identity(3, 2));
    const auto a3 = rep.antisymmetrizer(3, 3);
    CHECK(a3 * a3 == a3);
    CHECK(rep.antisymmetrizer(3, 3, 2) == a3);
}

TEST_CASE("compatible pairs reject a perturbed F") {
    const auto B = makeStandardR(Family::Orthogonal, 3, kQ);
    CHECK_NOTHROW(makePair(B, Op::permutation(3), "P"));
    CHECK_NOTHROW(makePair(B, B.R, "R"));
    auto f = Op::permutation(3);
    f += embed(Op::matrixUnit(3, 0, 1), {1}, 2);
    CHECK_THROWS(makePair(B, f, "bad"));
}

TEST_CASE("graded dimensions and the characteristic scalar") {
    const auto B = makeStandardR(Family::Orthogonal, 3, kQ);
    for (const auto& f : {Op::permutation(3), B.R}) {
        const auto pair = makePair(B, f);
        QuantumMatrixAlgebra<Rational> qa(pair, 3);
        CHECK(qa.reducer().dims() == std::vector<int>{1, 9, 35, 84});
        const auto p0 = qa.p(0);
        REQUIRE(p0.degree() == 0);
        CHECK(*p0.entry(0, 0) == Rational(545, 343));
        CHECK(qa.a(2) + qa.s(2) + qa.g() == qa.ch(Op::identity(3, 2)));
    }
}

TEST_CASE("closed forms at degree two") {
    const auto B = makeStandardR(Family::Orthogonal, 3, kQ);
    const auto pair = makePair(B, B.R);
    QuantumMatrixAlgebra<Rational> qa(pair, 2);
    const auto& par = qa.params();
    const Rational q2 = qNumber(2, par);
    auto lhsP = qa.p(2) - par.q * qa.mul(qa.a(1), qa.p(1));
    auto rhsP = Rational(-1) * q2 * qa.a(2) + (par.mu - par.q) * qa.g();
    CHECK(lhsP == rhsP);
    auto lhsS = qa.s(2) - qa.mul(qa.a(1), qa.s(1)) + qa.a(2);
    CHECK(lhsS == Rational(-1) * qa.g());
}

TEST_CASE("configuration errors surface before any work") {
    auto c = config("so", 3, "P", {"rmatrix"});
    c.q = "7/0";
    CHECK_THROWS_AS(runVerify(c), ConfigError);
    c.q = "1";
    CHECK_THROWS_AS(runVerify(c), ConfigError);
    c = config("sp", 3, "P", {"rmatrix"});
    CHECK_THROWS_AS(runVerify(c), ConfigError);
    c = config("so", 3, "P", {"nonsense"});
    CHECK_THROWS_AS(runVerify(c), ConfigError);
    c = config("so", 3, "P", {"rmatrix"});
    CHECK_THROWS_AS(dumpOperator(c, "aN", 5), ConfigError);
    CHECK_THROWS_AS(dumpOperator(c, "c2N", 3), ConfigError);
    c = config("import", 3, "P", {"rmatrix"});
    c.rPath = "/nonexistent/R.json";
    CHECK_THROWS_AS(runVerify(c), ImportError);
}

TEST_CASE("inadmissible orders are skipped with the violated constraint") {
    const auto res = runVerify(config("sp", 2, "P", {"idempotents"}));
    CHECK(res.exitCode() == 0);
    bool found = false;
    for (const auto& r : res.report.records())
        if (r.status == "skipped" && r.reason.find("mu = -q^-3") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("a failing check sets exit code 1") {
    const auto dir = std::filesystem::temp_directory_path() / "qmbmw-unit";
    std::filesystem::create_directories(dir);
    const auto B = makeStandardR(Family::Orthogonal, 3, kQ);
    Representation<Rational> rep(B);
    const auto path = (dir / "a2.json").string();
    std::ofstream(path) << toJson(rep.antisymmetrizer(2, 2)).dump();
    auto c = config("so", 3, path, {"twist"});
    const auto res = runVerify(c);
    CHECK(res.exitCode() == 1);
    CHECK(res.report.records().front().witness.contains("error"));
}

TEST_CASE("modular backend agrees with the rational one") {
    auto c = config("so", 3, "R", {"rmatrix", "qma"});
    c.maxDegree = 2;
    c.backend = Backend::Modular;
    const auto res = runVerify(c);
    CHECK(res.exitCode() == 0);
    CHECK(res.header["primes"][0] == 2147483659ull);
    CHECK(res.header["gradedDims"] == nlohmann::json{1, 9, 35});
    c.backend = Backend::Rational;
    const auto rat = runVerify(c);
    CHECK(rat.report.count("pass") == res.report.count("pass"));
}

TEST_CASE("reports are deterministic and omit timings on request") {
    auto c = config("so", 3, "P", {"rmatrix", "idempotents"});
    const auto a = renderReport(runVerify(c), false), b = renderReport(runVerify(c), false);
    CHECK(a == b);
    CHECK(a.find("elapsedMs") == std::string::npos);
    CHECK(renderReport(runVerify(c), true).find("elapsedMs") != std::string::npos);
    const auto first = nlohmann::json::parse(a.substr(0, a.find('\n')));
    CHECK(first.contains("header"));
}

TEST_CASE("environment selects the backend") {
    RunConfig c;
    setenv("QMBMW_BACKEND", "modular", 1);
    applyEnvironment(c);
    CHECK(c.backend == Backend::Modular);
    setenv("QMBMW_BACKEND", "bogus", 1);
    CHECK_THROWS_AS(applyEnvironment(c), ConfigError);
    unsetenv("QMBMW_BACKEND");
}
