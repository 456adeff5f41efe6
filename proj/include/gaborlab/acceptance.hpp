#pragma once

// The acceptance suite shared by `gaborlab accept` and the acceptance test
// binary. Each criterion is tagged with the module it exercises so a run can
// be filtered by module name or criterion number.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gaborlab::acceptance {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string module;
  std::string name;
  std::function<Outcome()> run;
};

struct Result {
  int id;
  std::string module;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

const std::vector<Criterion>& criteria();

/// Comma-separated tokens; each is a module name or a criterion number.
/// An empty filter selects everything.
bool selected(const Criterion& c, const std::string& filter);

/// Runs the selected criteria, printing one line per criterion as it
/// finishes when `log` is non-null. An exception inside a criterion is a
/// failure carrying the error text.
std::vector<Result> run(const std::string& filter, std::ostream* log = nullptr);

/// {"passed": n, "failed": m, "criteria": [...]}.
std::string summary_json(const std::vector<Result>& results);

}  // namespace gaborlab::acceptance
