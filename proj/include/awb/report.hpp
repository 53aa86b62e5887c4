#pragma once

#include <string>
#include <variant>
#include <vector>

#include "awb/geometry.hpp"

namespace awb {

using ResidualValue = std::variant<RatFn, MixedTensor>;

bool is_zero(const ResidualValue& v);
std::string to_string(const ResidualValue& v);

struct Residual {
    std::string check;
    std::string probe;
    ResidualValue value;
};

struct CheckTally {
    std::string name;
    std::size_t evaluated = 0;
    std::size_t failed = 0;
    bool applicable = true;
    std::string note;
};

// Outcome of a symbolic check: every evaluated residual is counted, nonzero
// ones are kept as witnesses. A check passes iff none of its residuals failed.
class Report {
public:
    explicit Report(std::string title = {}) : title_(std::move(title)) {}

    const std::string& title() const { return title_; }
    // Registers a check so that it shows up even when no probe reaches it.
    void declare(const std::string& check, bool applicable = true, const std::string& note = {});
    // Returns true when the value is zero.
    bool record(const std::string& check, const std::string& probe, const ResidualValue& value);
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    bool passed() const;
    bool passed(const std::string& check) const;
    bool has_check(const std::string& check) const;
    std::vector<std::string> failing_checks() const;
    const std::vector<Residual>& failures() const { return failures_; }
    const std::vector<CheckTally>& checks() const { return checks_; }
    const std::vector<std::string>& notes() const { return notes_; }

    // Appends another report's checks, optionally prefixing their names.
    void merge(const Report& other, const std::string& prefix = {});

    std::string to_text() const;

private:
    CheckTally& tally(const std::string& check);

    std::string title_;
    std::vector<CheckTally> checks_;
    std::vector<Residual> failures_;
    std::vector<std::string> notes_;
};

}  // namespace awb
