#include "qmbmw/report.hpp"

#include <algorithm>
#include <sstream>

namespace qmbmw {

void Report::merge(const Report& o) {
    records_.insert(records_.end(), o.records_.begin(), o.records_.end());
}

int Report::count(const std::string& status) const {
    return static_cast<int>(std::count_if(records_.begin(), records_.end(), [&](const CheckRecord& r) { return r.status == status; }));
}

void Report::normalize() {
    std::stable_sort(records_.begin(), records_.end(), [](const CheckRecord& a, const CheckRecord& b) {
        if (a.suite != b.suite) return a.suite < b.suite;
        if (a.check != b.check) return a.check < b.check;
        return a.params.dump() < b.params.dump();
    });
}

nlohmann::json Report::recordJson(const CheckRecord& r, bool timings) {
    nlohmann::json j = {{"suite", r.suite}, {"check", r.check}, {"paperRef", r.paperRef}, {"params", r.params}, {"status", r.status}};
    if (r.status == "skipped") j["reason"] = r.reason;
    if (r.status == "fail") j["witness"] = r.witness;
    if (timings) j["elapsedMs"] = static_cast<long long>(r.elapsedMs);
    return j;
}

std::string Report::jsonLines(const nlohmann::json& header, bool timings) const {
    std::ostringstream out;
    out << nlohmann::json{{"header", header}}.dump() << '\n';
    for (const auto& r : records_) out << recordJson(r, timings).dump() << '\n';
    nlohmann::json summary = {{"summary", {{"total", records_.size()}, {"pass", count("pass")}, {"fail", count("fail")}, {"skipped", count("skipped")}}}};
    out << summary.dump() << '\n';
    return out.str();
}

template <class S>
nlohmann::json operatorDiff(const TensorOperator<S>& a, const TensorOperator<S>& b, int maxEntries) {
    nlohmann::json out = nlohmann::json::array();
    if (a.legs() == 0 && b.legs() == 0) {
        out.push_back({{"row", nlohmann::json::array()}, {"col", nlohmann::json::array()}, {"lhs", a.scalarValue().str()}, {"rhs", b.scalarValue().str()}});
        return out;
    }
    if (a.dimV() != b.dimV() || a.legs() != b.legs()) {
        out.push_back({{"detail", "shape mismatch"}, {"lhsLegs", a.legs()}, {"rhsLegs", b.legs()}});
        return out;
    }
    auto d = a - b;
    for (typename TensorOperator<S>::Index r = 0; r < d.dim() && static_cast<int>(out.size()) < maxEntries; ++r) {
        for (const auto& e : d.row(r)) {
            if (static_cast<int>(out.size()) >= maxEntries) break;
            auto rd = a.digits(r), cd = a.digits(e.col);
            for (int& x : rd) ++x;
            for (int& x : cd) ++x;
            out.push_back({{"row", rd}, {"col", cd}, {"lhs", a.at(r, e.col).str()}, {"rhs", b.at(r, e.col).str()}});
        }
    }
    return out;
}

template nlohmann::json operatorDiff(const TensorOperator<Rational>&, const TensorOperator<Rational>&, int);
template nlohmann::json operatorDiff(const TensorOperator<ModP>&, const TensorOperator<ModP>&, int);

void Checker::skip(const std::string& name, const std::string& ref, const std::string& reason) {
    CheckRecord r;
    r.suite = suite_;
    r.check = name;
    r.paperRef = ref;
    r.params = params_;
    r.status = "skipped";
    r.reason = reason;
    report_.add(std::move(r));
}

void Checker::record(const std::string& name, const std::string& ref, std::optional<nlohmann::json> witness, double ms) {
    CheckRecord r;
    r.suite = suite_;
    r.check = name;
    r.paperRef = ref;
    r.params = params_;
    r.status = witness ? "fail" : "pass";
    if (witness) r.witness = *witness;
    r.elapsedMs = ms;
    report_.add(std::move(r));
}

}  // namespace qmbmw
