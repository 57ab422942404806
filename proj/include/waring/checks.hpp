#pragma once

#include <string>
#include <vector>

namespace waring {

struct CheckItem {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Ordered re-verification results; `first_failure()` names the earliest
// violated condition, which mutation tests rely on.
struct CheckReport {
  std::vector<CheckItem> items;

  void add(const std::string& name, bool ok, const std::string& detail = "") {
    items.push_back({name, ok, detail});
  }

  bool all_ok() const {
    for (const auto& i : items)
      if (!i.ok) return false;
    return true;
  }

  std::string first_failure() const {
    for (const auto& i : items)
      if (!i.ok) return i.name;
    return "";
  }
};

}  // namespace waring
