#pragma once

#include "qmbmw/tensor_operator.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace qmbmw {

struct CheckRecord {
    std::string suite;
    std::string check;
    std::string paperRef;  // the identity being checked, written out
    nlohmann::json params;
    std::string status;  // pass | fail | skipped
    std::string reason;  // for skipped checks
    nlohmann::json witness;  // present iff status == fail
    double elapsedMs = 0;
};

class Report {
public:
    void add(CheckRecord r) { records_.push_back(std::move(r)); }
    void merge(const Report& o);
    const std::vector<CheckRecord>& records() const { return records_; }
    std::vector<CheckRecord>& records() { return records_; }
    int count(const std::string& status) const;
    int failures() const { return count("fail"); }
    // deterministic order: suite, check name, params
    void normalize();
    // JSON lines, one record per line, then a summary object
    std::string jsonLines(const nlohmann::json& header, bool timings) const;
    static nlohmann::json recordJson(const CheckRecord& r, bool timings);

private:
    std::vector<CheckRecord> records_;
};

template <class S>
nlohmann::json operatorDiff(const TensorOperator<S>& a, const TensorOperator<S>& b, int maxEntries = 3);

class Checker {
public:
    Checker(Report& report, std::string suite, nlohmann::json params)
        : report_(report), suite_(std::move(suite)), params_(std::move(params)) {}

    const std::string& suite() const { return suite_; }
    const nlohmann::json& params() const { return params_; }

    // f returns std::nullopt on success or a witness on failure; exceptions count as failures
    template <class F>
    bool run(const std::string& name, const std::string& ref, F&& f);

    template <class S>
    bool equal(const std::string& name, const std::string& ref, const TensorOperator<S>& lhs, const TensorOperator<S>& rhs) {
        return run(name, ref, [&]() -> std::optional<nlohmann::json> {
            if (lhs == rhs) return std::nullopt;
            return operatorDiff(lhs, rhs);
        });
    }

    bool expect(const std::string& name, const std::string& ref, bool ok, nlohmann::json witness = {}) {
        return run(name, ref, [&]() -> std::optional<nlohmann::json> {
            if (ok) return std::nullopt;
            return witness.is_null() ? nlohmann::json{{"detail", "condition false"}} : witness;
        });
    }

    void skip(const std::string& name, const std::string& ref, const std::string& reason);

private:
    void record(const std::string& name, const std::string& ref, std::optional<nlohmann::json> witness, double ms);

    Report& report_;
    std::string suite_;
    nlohmann::json params_;
};

template <class F>
bool Checker::run(const std::string& name, const std::string& ref, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    std::optional<nlohmann::json> witness;
    try {
        witness = f();
    } catch (const std::exception& e) {
        witness = nlohmann::json{{"error", e.what()}};
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    record(name, ref, witness, ms);
    return !witness.has_value();
}

}  // namespace qmbmw
