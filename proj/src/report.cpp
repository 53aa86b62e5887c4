#include "awb/report.hpp"

#include <algorithm>
#include <sstream>

namespace awb {

bool is_zero(const ResidualValue& v) {
    return std::visit([](const auto& x) { return x.is_zero(); }, v);
}

std::string to_string(const ResidualValue& v) {
    return std::visit([](const auto& x) { return x.to_string(); }, v);
}

CheckTally& Report::tally(const std::string& check) {
    for (auto& c : checks_)
        if (c.name == check) return c;
    CheckTally t;
    t.name = check;
    checks_.push_back(std::move(t));
    return checks_.back();
}

void Report::declare(const std::string& check, bool applicable, const std::string& note) {
    auto& t = tally(check);
    t.applicable = applicable;
    if (!note.empty()) t.note = note;
}

bool Report::record(const std::string& check, const std::string& probe, const ResidualValue& value) {
    auto& t = tally(check);
    ++t.evaluated;
    if (is_zero(value)) return true;
    ++t.failed;
    failures_.push_back(Residual{check, probe, value});
    return false;
}

bool Report::passed() const { return failures_.empty(); }

bool Report::passed(const std::string& check) const {
    for (const auto& c : checks_)
        if (c.name == check) return c.failed == 0;
    return true;
}

bool Report::has_check(const std::string& check) const {
    return std::any_of(checks_.begin(), checks_.end(), [&](const CheckTally& c) { return c.name == check; });
}

std::vector<std::string> Report::failing_checks() const {
    std::vector<std::string> out;
    for (const auto& c : checks_)
        if (c.failed) out.push_back(c.name);
    return out;
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (const auto& c : other.checks_) {
        auto& t = tally(prefix + c.name);
        t.evaluated += c.evaluated;
        t.failed += c.failed;
        t.applicable = c.applicable;
        if (!c.note.empty()) t.note = c.note;
    }
    for (const auto& f : other.failures_) failures_.push_back(Residual{prefix + f.check, f.probe, f.value});
    for (const auto& n : other.notes_) notes_.push_back(n);
}

std::string Report::to_text() const {
    std::ostringstream os;
    if (!title_.empty()) os << title_ << ": " << (passed() ? "pass" : "fail") << "\n";
    for (const auto& c : checks_) {
        os << "  " << c.name << ": ";
        if (!c.applicable)
            os << "n/a";
        else
            os << (c.failed ? "fail" : "pass") << " (" << c.evaluated << " probes";
        if (c.applicable) os << (c.failed ? ", " + std::to_string(c.failed) + " nonzero)" : ")");
        if (!c.note.empty()) os << " - " << c.note;
        os << "\n";
    }
    for (const auto& f : failures_) os << "    [" << f.check << "] " << f.probe << " -> " << to_string(f.value) << "\n";
    for (const auto& n : notes_) os << "  note: " << n << "\n";
    return os.str();
}

}  // namespace awb
