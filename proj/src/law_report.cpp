#include "gm/law_report.hpp"

#include <algorithm>

namespace gm {

std::string LawReport::to_line() const {
  std::string line = "LAW " + name + (pass ? " PASS" : " FAIL");
  if (!pass && counterexample) line += " counterexample=" + *counterexample;
  return line;
}

bool all_pass(const std::vector<LawReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const LawReport& r) { return r.pass; });
}

}  // namespace gm
