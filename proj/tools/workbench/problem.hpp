#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "awb/vvforms.hpp"

namespace wb {

// Syntax errors exit with 2, resolution and degree errors with 3.
class DslError : public std::runtime_error {
public:
    enum Kind { parse, semantic };
    DslError(Kind kind, int line, int column, const std::string& what);
    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    Kind kind_;
    int line_, column_;
};

struct Task {
    std::string name;  // "as NAME" or command followed by its arguments
    std::string command;
    std::vector<std::string> args;
    bool expect_fail = false;
    int line = 0;
};

struct Problem {
    std::map<std::string, awb::ChartPtr> charts;
    std::map<std::string, awb::AlgebroidPtr> algebroids;
    std::map<const awb::Algebroid*, awb::MixedTensor> bivector_of;  // cotangent algebroids and their bivectors
    std::map<std::string, awb::MixedTensor> tensors;
    std::map<std::string, awb::IMTensor> ims;
    std::vector<Task> tasks;

    const awb::AlgebroidPtr& algebroid(const std::string& name, int line) const;
    const awb::MixedTensor& tensor(const std::string& name, int line) const;
    const awb::IMTensor& im(const std::string& name, int line) const;
};

Problem parse_problem(std::string_view text);

// Evaluates a tensor expression over a bundle: chart variables are scalars,
// d<var> are coordinate differentials and frame names are sections.
awb::MixedTensor eval_tensor(std::string_view text, const awb::BundlePtr& bundle, int line, int column);

}  // namespace wb
