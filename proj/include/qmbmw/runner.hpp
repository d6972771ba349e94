#pragma once

#include "qmbmw/report.hpp"
#include "qmbmw/rmatrix.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmbmw {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ImportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Backend { Rational, Modular };

struct RunConfig {
    std::string family = "so";  // so | sp | import
    int dimV = 3;
    std::string q = "7/5";
    std::string fChoice = "P";  // P | R | path to an operator JSON
    std::string rPath;          // operator JSON for family = import
    int maxDegree = 3;
    Backend backend = Backend::Rational;
    int primes = 2;
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 1;
    int nMax = 0;  // Newton/Wronski range; 0 means maxDegree
};

inline constexpr const char* kToolVersion = "1.0.0";
inline const std::vector<std::string> kSuiteOrder{"rmatrix", "idempotents", "contractors", "appendix", "twist", "qma"};

// QMBMW_BACKEND=rational|modular overrides the backend
void applyEnvironment(RunConfig& c);
// checks every field and expands "all"; throws ConfigError before any work
void validate(RunConfig& c);
nlohmann::json configJson(const RunConfig& c);

// the first k primes above 2^31
std::vector<std::uint64_t> defaultPrimes(int k);

struct RunResult {
    nlohmann::json header;
    Report report;
    int exitCode() const { return report.failures() == 0 ? 0 : 1; }
};

// runs the selected suites in dependency order; check failures are records, not exceptions
RunResult runVerify(RunConfig c);
std::string renderReport(const RunResult& r, bool timings);

// which: R | K | psiR | E | G | aN | sN | c2N; order is n for aN/sN and the leg count 2n for c2N
nlohmann::json dumpOperator(RunConfig c, const std::string& which, int order);

// random rational q = a/b with 2 <= a, b <= 12, rejecting q = +-1 and every q for which the
// family's R-matrix cannot be built
Rational sampleQ(Family family, int N, std::mt19937_64& rng);

}  // namespace qmbmw
