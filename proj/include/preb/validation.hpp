#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace preb::validation {

enum class Level { quick, full };

struct Options {
    Level level = Level::quick;
    bool tamper = false;  // perturbs tau by 1e-6 inside the Lyapunov path of AC1
    int jobs = 0;
};

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CriterionResult {
    std::string id;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;

    bool pass() const;
    // First failing check, otherwise the one closest to its tolerance.
    const Check* headline() const;
};

struct Criterion {
    std::string id;
    std::string title;
    std::function<void(const Options&, CriterionResult&)> body;
};

const std::vector<Criterion>& criteria();

CriterionResult run_criterion(const Criterion& c, const Options& opts);
std::vector<CriterionResult> run_all(const Options& opts, const std::vector<std::string>& only = {});

void print_header(std::ostream& os);
void print_result(std::ostream& os, const CriterionResult& r, bool details = true);

} // namespace preb::validation
