#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace treelab {

// Line-oriented findings with a trailing verdict. Findings are emitted
// sorted so reruns are byte-identical.
class Report {
 public:
  void add(std::string finding) { findings_.emplace_back(std::move(finding), false); }
  void add_fail(std::string finding) { findings_.emplace_back(std::move(finding), true); }

  void add_check(const std::string& finding, bool ok) {
    findings_.emplace_back(finding + " result=" + (ok ? "pass" : "fail"), !ok);
  }

  bool pass() const {
    for (const auto& [line, failed] : findings_)
      if (failed) return false;
    return true;
  }

  std::size_t count() const { return findings_.size(); }

  std::string render() const {
    std::vector<std::string> lines;
    for (const auto& [line, failed] : findings_) lines.push_back(line);
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    out += std::string("verdict=") + (pass() ? "pass" : "fail") +
           " count=" + std::to_string(count()) + "\n";
    return out;
  }

  int exit_code() const { return pass() ? 0 : 1; }

 private:
  std::vector<std::pair<std::string, bool>> findings_;
};

}  // namespace treelab
