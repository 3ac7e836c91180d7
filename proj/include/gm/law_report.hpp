#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gm {

/// Outcome of one executable law. A failing report always names a witness.
struct LawReport {
  std::string name;
  bool pass = true;
  std::optional<std::string> counterexample;

  static LawReport ok(std::string name) { return {std::move(name), true, std::nullopt}; }
  static LawReport fail(std::string name, std::string witness) {
    return {std::move(name), false, std::move(witness)};
  }

  /// "LAW <name> PASS" or "LAW <name> FAIL counterexample=<witness>"
  std::string to_line() const;
};

bool all_pass(const std::vector<LawReport>& reports);

/// Accumulates a law over many cases and keeps the first witness.
class LawCheck {
 public:
  explicit LawCheck(std::string name) : name_(std::move(name)) {}

  /// Records a failing case unless one is already recorded.
  void fail(const std::string& witness) {
    if (!witness_) witness_ = witness;
  }
  void expect(bool holds, const std::string& witness) {
    if (!holds) fail(witness);
  }
  bool failed() const { return witness_.has_value(); }
  LawReport report() const {
    return witness_ ? LawReport::fail(name_, *witness_) : LawReport::ok(name_);
  }

 private:
  std::string name_;
  std::optional<std::string> witness_;
};

}  // namespace gm
