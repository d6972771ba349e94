// qmbmw: build BMW-type R-matrices and their quantum matrix algebras, run the verification
// suites and dump operators as JSON.
//
//   qmbmw verify --suite all --family so --dim 3 --q 7/5 --f-matrix R --max-degree 3
//   qmbmw dump --which aN --order 2 --family so --dim 3 --q 7/5 --out a2.json
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 bad configuration or import.

#include "qmbmw/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

void addInstanceOptions(CLI::App& app, qmbmw::RunConfig& c, std::string& backend) {
    app.add_option("--family", c.family, "so, sp or import")->capture_default_str();
    app.add_option("--dim", c.dimV, "dimension N of V")->capture_default_str();
    app.add_option("--q", c.q, "deformation parameter, e.g. 7/5")->capture_default_str();
    app.add_option("--f-matrix", c.fChoice, "P, R or an operator JSON file")->capture_default_str();
    app.add_option("--r-file", c.rPath, "R operator JSON for --family import");
    app.add_option("--backend", backend, "rational or modular")->check(CLI::IsMember({"rational", "modular"}));
    app.add_option("--seed", c.seed, "seed for every sampled quantity")->capture_default_str();
}

void writeOut(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw qmbmw::ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of BMW-type R-matrices and quantum matrix algebras"};
    app.require_subcommand(1);

    qmbmw::RunConfig cfg;
    std::string backend, out, which;
    bool timings = false;
    int order = 2;

    auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON-lines report");
    addInstanceOptions(*verify, cfg, backend);
    verify->add_option("--suite", cfg.suites, "rmatrix, idempotents, contractors, appendix, twist, qma or all")->delimiter(',');
    verify->add_option("--max-degree", cfg.maxDegree, "highest graded degree of the algebra")->capture_default_str();
    verify->add_option("--primes", cfg.primes, "number of primes for the modular backend")->capture_default_str();
    verify->add_option("--n-max", cfg.nMax, "Newton/Wronski range, 0 for max-degree")->capture_default_str();
    verify->add_option("--out", out, "report file, - for stdout");
    verify->add_flag("--timings", timings, "include elapsedMs in the report");

    auto* dump = app.add_subcommand("dump", "write one operator in the JSON operator format");
    addInstanceOptions(*dump, cfg, backend);
    dump->add_option("--which", which, "R, K, psiR, E, G, aN, sN or c2N")->required();
    dump->add_option("--order", order, "n for aN/sN, leg count 2n for c2N")->capture_default_str();
    dump->add_option("--out", out, "output file, - for stdout");

    auto* dumpR = app.add_subcommand("dump-r", "write R in the JSON operator format");
    addInstanceOptions(*dumpR, cfg, backend);
    dumpR->add_option("--out", out, "output file, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        qmbmw::applyEnvironment(cfg);
        if (backend == "rational") cfg.backend = qmbmw::Backend::Rational;
        if (backend == "modular") cfg.backend = qmbmw::Backend::Modular;
        if (*verify) {
            auto res = qmbmw::runVerify(cfg);
            writeOut(out, qmbmw::renderReport(res, timings));
            std::cerr << "pass " << res.report.count("pass") << "  fail " << res.report.count("fail") << "  skipped "
                      << res.report.count("skipped") << '\n';
            return res.exitCode();
        }
        const std::string w = *dumpR ? "R" : which;
        writeOut(out, qmbmw::dumpOperator(cfg, w, order).dump() + '\n');
        return 0;
    } catch (const qmbmw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const qmbmw::ImportError& e) {
        std::cerr << "import error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
}
