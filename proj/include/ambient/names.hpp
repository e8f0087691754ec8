#pragma once

// Interned names for the ambient calculus. A Name is an index into a global
// table; equality is index equality, ordering is spelling order (stable across
// runs regardless of interning sequence).

#include <cstdint>
#include <deque>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ambient {

struct Name {
  std::uint32_t id = 0;
  friend bool operator==(Name a, Name b) { return a.id == b.id; }
  friend bool operator!=(Name a, Name b) { return a.id != b.id; }
};

namespace detail {

class NameTable {
 public:
  static NameTable& instance() {
    static NameTable t;
    return t;
  }

  Name intern(std::string_view s) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(std::string(s));
    if (it != ids_.end()) return Name{it->second};
    std::uint32_t id = static_cast<std::uint32_t>(spellings_.size());
    spellings_.emplace_back(s);
    ids_.emplace(std::string(s), id);
    return Name{id};
  }

  // The deque never moves its elements, so the returned reference stays valid
  // while other threads intern new names.
  const std::string& spelling(Name n) const {
    std::lock_guard<std::mutex> lock(mu_);
    return spellings_.at(n.id);
  }

 private:
  mutable std::mutex mu_;
  std::deque<std::string> spellings_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

}  // namespace detail

inline Name name(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty name");
  return detail::NameTable::instance().intern(s);
}

inline const std::string& name_str(Name n) {
  return detail::NameTable::instance().spelling(n);
}

// Spelling order; used wherever a deterministic total order on names is needed.
inline int name_cmp(Name a, Name b) {
  if (a == b) return 0;
  return name_str(a).compare(name_str(b)) < 0 ? -1 : 1;
}

struct NameLess {
  bool operator()(Name a, Name b) const { return name_cmp(a, b) < 0; }
};

using NameSet = std::set<Name, NameLess>;

// Deterministic fresh-name generation: base spelling plus a numeric suffix,
// skipping everything in `avoid`. `seed` offsets the suffix sequence.
inline Name fresh_name(const NameSet& avoid, std::string_view base = "m",
                       std::uint64_t seed = 0) {
  for (std::uint64_t k = seed;; ++k) {
    Name cand = name(std::string(base) + std::to_string(k));
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace ambient
